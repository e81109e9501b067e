"""Module: otfs_bench.core.estimators.impulse

Impulse pilots with least-squares read-out, extended to several transmit
antennas by packing one impulse per antenna into the pilot footprint.
"""

import math
from typing import List, Optional, Tuple

import numpy as np

from otfs_bench.constants import ESTIMATOR_IMPULSE, FLAG_INSUFFICIENT_GUARD
from otfs_bench.core.estimators.base import (BaseEstimator, EstimationProblem, EstimatorKind,
                                             EstimatorSpec)
from otfs_bench.core.modem import wrap_doppler
from otfs_bench.exceptions import ConfigurationError, DimensionError
from otfs_bench.types import (ChannelSupport, ComplexArray, EstimateRecord, ImpulseLayout,
                              OtfsConfig)


def _spread_grid(
    n_t: int, fit_rows: int, fit_cols: int, rows: int, cols: int, support: ChannelSupport
) -> Tuple[int, int]:
    """Grid shape holding n_t impulses whose smallest spacing-to-support ratio is largest."""
    best = None
    for grid_rows in range(1, fit_rows + 1):
        grid_cols = math.ceil(n_t / grid_rows)
        if grid_cols > fit_cols:
            continue
        d_ell, d_k = rows // grid_rows, cols // grid_cols
        key = (min(d_ell / support.M_max, d_k / support.N_max), d_ell * d_k)
        if best is None or key > best[0]:
            best = (key, grid_rows, grid_cols)
    return best[1], best[2]


def impulse_mimo_layout(
    n_t: int, support: ChannelSupport, footprint: Tuple[int, int]
) -> ImpulseLayout:
    """Place one impulse per antenna inside a (rows × cols) footprint.

    The footprint starts at delay 0 and is centered in Doppler. When the
    footprint holds N_t support-sized windows the impulses are spread over the
    grid shape with the widest guards; otherwise the spacing is compressed
    uniformly and ``insufficient_guard`` is set.
    """
    rows, cols = footprint
    M_max, N_max = support.M_max, support.N_max
    fit_rows, fit_cols = rows // M_max, cols // N_max
    if fit_rows * fit_cols >= n_t:
        grid_rows, grid_cols = _spread_grid(n_t, fit_rows, fit_cols, rows, cols, support)
        flagged = False
    else:
        grid_cols = min(n_t, max(1, fit_cols))
        grid_rows = math.ceil(n_t / grid_cols)
        if grid_rows > rows:
            grid_rows = rows
            grid_cols = math.ceil(n_t / grid_rows)
        if grid_cols > cols:
            raise ConfigurationError(f"footprint {rows}×{cols} cannot hold {n_t} impulses")
        flagged = True
    spacing = (max(1, rows // grid_rows), max(1, cols // grid_cols))

    d_ell, d_k = spacing
    first_k = -(cols // 2) + d_k // 2
    positions = tuple(
        ((p // grid_cols) * d_ell, first_k + (p % grid_cols) * d_k) for p in range(n_t)
    )
    return ImpulseLayout(
        positions=positions, spacing=spacing, footprint=footprint, insufficient_guard=flagged
    )


def _window(ell_p: int, k_p: int, support: ChannelSupport, cfg: OtfsConfig):
    """Frame rows and columns of the support window read for an impulse at (ℓ_p, k_p)."""
    ell = np.arange(support.M_max)
    k = np.arange(support.N_max) - support.N_max // 2
    rows = (ell_p + ell) % cfg.M
    cols = wrap_doppler(k_p + k, cfg.N) + cfg.N // 2
    return rows, cols


def impulse_frames(layout: ImpulseLayout, cfg: OtfsConfig) -> List[ComplexArray]:
    """Unit impulse frame for every antenna of the layout."""
    frames = []
    for ell, k in layout.positions:
        frame = np.zeros((cfg.M, cfg.N), dtype=complex)
        frame[ell % cfg.M, int(wrap_doppler(k, cfg.N)) + cfg.N // 2] = 1.0
        frames.append(frame)
    return frames


def read_mask(layout: ImpulseLayout, support: ChannelSupport, cfg: OtfsConfig) -> np.ndarray:
    """Union of the support windows the LS read-out takes, one per antenna."""
    mask = np.zeros((cfg.M, cfg.N), dtype=bool)
    for ell_p, k_p in layout.positions:
        mask[np.ix_(*_window(ell_p, k_p, support, cfg))] = True
    return mask


def impulse_ls(
    Y_dd: ComplexArray,
    cfg: OtfsConfig,
    support: ChannelSupport,
    layout: Optional[ImpulseLayout] = None,
) -> ComplexArray:
    """Per-antenna LS estimate Ĥ^DD (M×N×N_t) inside the finite support window.

    For an impulse at (ℓ_p, k_p) the response at channel coordinate (ℓ, k) is read
    at (ℓ_p + ℓ, k_p + k) and its phase e^{j2π(ℓ_p+ℓ)k/(N(M+N_cp))} removed.
    Without a layout a single impulse at the origin is assumed.
    """
    Y_dd = np.asarray(Y_dd, dtype=complex)
    if Y_dd.shape != (cfg.M, cfg.N):
        raise DimensionError(f"received frame shape {Y_dd.shape} != {(cfg.M, cfg.N)}")
    positions = layout.positions if layout is not None else ((0, 0),)
    ell = np.arange(support.M_max)
    k = np.arange(support.N_max) - support.N_max // 2
    estimate = np.zeros((cfg.M, cfg.N, len(positions)), dtype=complex)
    for p, (ell_p, k_p) in enumerate(positions):
        rows, cols = _window(ell_p, k_p, support, cfg)
        phase = np.exp(-2j * np.pi * np.outer(rows, k) / (cfg.N * cfg.symbol_length))
        estimate[np.ix_(ell, k + cfg.N // 2, [p])] = (Y_dd[np.ix_(rows, cols)] * phase)[
            :, :, None
        ]
    return estimate


class ImpulseEstimator(BaseEstimator):
    """One impulse per antenna, LS read-out of each response window."""

    def __init__(self, params=None):
        super().__init__(
            EstimatorSpec(
                id=ESTIMATOR_IMPULSE,
                label="Impulse LS",
                kind=EstimatorKind.DELAY_DOPPLER,
                description="Impulse pilots with guard spacing and LS read-out",
            ),
            params,
        )

    def _estimate(self, problem: EstimationProblem) -> EstimateRecord:
        estimate = impulse_ls(problem.received, problem.cfg, problem.support, problem.layout)
        flags = [FLAG_INSUFFICIENT_GUARD] if problem.layout.insufficient_guard else []
        return EstimateRecord(
            h_hat=estimate,
            meta={"flags": flags, "spacing": list(problem.layout.spacing)},
        )
