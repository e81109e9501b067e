"""Module: otfs_bench.core.synthetic

Constructed channels and recovery instances with known ground truth.
"""

from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from otfs_bench.core.estimators.lifting import burst_indices
from otfs_bench.core.sensing import build_sensing_matrix, gen_pilots
from otfs_bench.types import (ComplexArray, DominantPath, OtfsConfig, PathSet, PilotDims,
                              SensingSystem, Subpath, TapChannel, column_index)


def random_frame(cfg: OtfsConfig, seed: int) -> ComplexArray:
    """Unit-power complex Gaussian M×N frame."""
    rng = np.random.default_rng(seed)
    shape = (cfg.M, cfg.N)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def tone_channel(cfg: OtfsConfig, gains: ComplexArray, tones: Sequence[float]) -> TapChannel:
    """Taps h[κ, ℓ] = Σ_q gains[ℓ, q] e^{j2π f_q κ/(N(M+N_cp))}, tones f_q in Doppler bins."""
    gains = np.atleast_2d(np.asarray(gains, dtype=complex))
    kappa = np.arange(1, cfg.frame_length + 1)
    phase = np.exp(2j * np.pi * np.outer(kappa, tones) / (cfg.N * cfg.symbol_length))
    return TapChannel(taps=phase @ gains.T)


def random_tone_channel(
    cfg: OtfsConfig, L: int, tones: Sequence[float], seed: int
) -> TapChannel:
    rng = np.random.default_rng(seed)
    shape = (L + 1, len(tones))
    gains = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return tone_channel(cfg, gains / np.sqrt(2.0 * gains.size), tones)


def on_grid_path_set(
    cfg: OtfsConfig, n_t: int, cells: Iterable[Tuple[int, int, int, complex]]
) -> PathSet:
    """One single-subpath path per (delay bin, Doppler bin, angle bin, gain).

    Delays, Doppler shifts and angles sit exactly on the grid, so the
    delay-Doppler-angle tensor has no leakage apart from the pulse tails.
    """
    paths = []
    for ell, k, r, alpha in cells:
        subpath = Subpath(alpha=complex(alpha), nu=k / (cfg.N * cfg.T), psi=r / n_t)
        paths.append(DominantPath(tau=ell * cfg.T_s, subpaths=(subpath,)))
    return PathSet(paths=tuple(paths))


def structured_instance(
    dims: PilotDims,
    cfg: OtfsConfig,
    n_t: int,
    D: int,
    seed: int,
    delay: Optional[int] = None,
    doppler: Sequence[int] = (-1, 0),
) -> Tuple[SensingSystem, ComplexArray, np.ndarray]:
    """Noiseless y = Ψh for one path: one delay bin, a Doppler block, a cyclic angle burst.

    Returns:
        (system, h, support columns), with the burst start drawn from the seed.
    """
    rng = np.random.default_rng(seed)
    pattern = gen_pilots(dims, n_t, int(rng.integers(2**31)))
    psi = build_sensing_matrix(pattern, cfg)
    ell = int(rng.integers(dims.M_g)) if delay is None else delay
    start = int(rng.integers(n_t))
    columns = np.array(
        sorted(
            column_index(ell, k, int(r) - n_t // 2, dims.M_g, dims.N_g, n_t)
            for r in burst_indices(start, D, n_t)
            for k in doppler
        )
    )
    h = np.zeros(psi.shape[1], dtype=complex)
    # magnitudes bounded away from zero
    magnitude = rng.uniform(0.5, 1.5, columns.size)
    h[columns] = magnitude * np.exp(2j * np.pi * rng.uniform(size=columns.size))
    system = SensingSystem(y=psi @ h, psi=psi, dims=dims, n_t=n_t)
    return system, h, columns
