"""Module: otfs_bench.core.sensing

Pilot/guard frame layout and the sparse-recovery measurement model.

Layout of the sparse pilot frame (per antenna, all antennas overlapped):
the M_tau×N_nu Gaussian pilot block sits at delays [0, M_tau-1] and Doppler
[-N_nu/2, N_nu/2-1]; the delay guard takes the M_g rows cyclically preceding
the block (delays [M-M_g, M-1]); Doppler guards of N_g/2 columns flank it.

With a zero guard the received pilot block sees the zero-padded convolution
of the pilot block with the truncated channel. With a cyclic guard the guard
cells repeat the block periodically and the received block is the
two-dimensional periodic convolution. The sensing matrix models either.
"""

from typing import Optional, Sequence

import numpy as np
from scipy import fft

from otfs_bench.constants import GUARD_MODES, GUARD_ZERO
from otfs_bench.exceptions import ArgumentError, ConfigurationError, DimensionError
from otfs_bench.types import (ChannelSupport, ComplexArray, OtfsConfig, PilotDims, PilotPattern,
                              SensingSystem)


def validate_dims(dims: PilotDims, cfg: OtfsConfig, support: Optional[ChannelSupport] = None):
    """Check the pilot/guard layout invariants against the frame and channel support."""
    if min(dims.M_tau, dims.N_nu, dims.M_g, dims.N_g) < 1:
        raise ConfigurationError(f"pilot dims must be positive: {dims}")
    if dims.N_nu % 2 or dims.N_g % 2:
        raise ConfigurationError(f"N_nu and N_g must be even: {dims}")
    if dims.M_tau + dims.M_g > cfg.M or dims.N_nu + dims.N_g > cfg.N:
        raise ConfigurationError(f"pilot block and guards {dims} do not fit {cfg.M}×{cfg.N}")
    if support is not None:
        if dims.M_tau < support.M_max or dims.N_nu < support.N_max:
            raise ConfigurationError(
                f"pilot block {dims.M_tau}×{dims.N_nu} smaller than channel support "
                f"{support.M_max}×{support.N_max}"
            )
        if dims.M_g < support.M_max - 1 or dims.N_g // 2 < support.N_max // 2 - 1:
            raise ConfigurationError(f"guards {dims.M_g}×{dims.N_g} too small for {support}")


def gen_pilots(dims: PilotDims, n_t: int, seed: int, guard: str = GUARD_ZERO) -> PilotPattern:
    """Independent unit-variance complex Gaussian pilots, fully overlapped across antennas."""
    if guard not in GUARD_MODES:
        raise ConfigurationError(f"guard must be one of {', '.join(GUARD_MODES)}, got '{guard}'")
    rng = np.random.default_rng(seed)
    shape = (dims.M_tau, dims.N_nu, n_t)
    pilots = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    return PilotPattern(dims=dims, pilots=pilots, guard=guard)


def _footprint_cells(dims: PilotDims, cfg: OtfsConfig):
    """Frame rows and columns of the block plus guards, block-relative order from (-M_g, -N_g/2)."""
    rows = np.arange(-dims.M_g, dims.M_tau) % cfg.M
    cols = (np.arange(dims.N_nu + dims.N_g) - dims.N_g // 2 + cfg.N // 2 - dims.N_nu // 2) % cfg.N
    return rows, cols


def cyclic_extension(block: ComplexArray, dims: PilotDims) -> ComplexArray:
    """(M_tau+M_g)×(N_nu+N_g) periodic repetition of a pilot block over its footprint."""
    rows = np.arange(-dims.M_g, dims.M_tau) % dims.M_tau
    cols = (np.arange(dims.N_nu + dims.N_g) - dims.N_g // 2) % dims.N_nu
    return block[np.ix_(rows, cols)]


def pilot_mask(dims: PilotDims, cfg: OtfsConfig) -> np.ndarray:
    mask = np.zeros((cfg.M, cfg.N), dtype=bool)
    c0 = cfg.N // 2 - dims.N_nu // 2
    mask[: dims.M_tau, c0 : c0 + dims.N_nu] = True
    return mask


def guard_mask(dims: PilotDims, cfg: OtfsConfig) -> np.ndarray:
    """Guard cells around the pilot block."""
    rows, cols = _footprint_cells(dims, cfg)
    mask = np.zeros((cfg.M, cfg.N), dtype=bool)
    mask[np.ix_(rows, cols)] = True
    return mask & ~pilot_mask(dims, cfg)


def data_mask(dims: PilotDims, cfg: OtfsConfig) -> np.ndarray:
    return ~(pilot_mask(dims, cfg) | guard_mask(dims, cfg))


def embed_pilots(
    pattern: PilotPattern,
    cfg: OtfsConfig,
    p: int,
    data: Optional[ComplexArray] = None,
    frame: Optional[ComplexArray] = None,
) -> ComplexArray:
    """Build antenna p's delay-Doppler frame.

    Args:
        pattern: Pilot layout and pilot tensor.
        cfg: Frame configuration.
        p: Antenna index.
        data: Optional symbols, one per data cell in row-major order of ``data_mask``.
        frame: Optional existing frame whose data cells are kept.

    Returns:
        M×N frame with pilots, guards filled per the pattern and data elsewhere.
    """
    validate_dims(pattern.dims, cfg)
    if not 0 <= p < pattern.n_t:
        raise ArgumentError(f"antenna index {p} out of range for N_t={pattern.n_t}")
    out = np.zeros((cfg.M, cfg.N), dtype=complex)
    cells = data_mask(pattern.dims, cfg)
    if frame is not None:
        frame = np.asarray(frame, dtype=complex)
        if frame.shape != (cfg.M, cfg.N):
            raise DimensionError(f"frame shape {frame.shape} != {(cfg.M, cfg.N)}")
        out[cells] = frame[cells]
    if data is not None:
        data = np.asarray(data, dtype=complex).reshape(-1)
        if data.shape[0] != int(cells.sum()):
            raise ConfigurationError(
                f"{data.shape[0]} data symbols for {int(cells.sum())} data cells"
            )
        out[cells] = data
    block = pattern.pilots[:, :, p]
    if pattern.cyclic:
        rows, cols = _footprint_cells(pattern.dims, cfg)
        out[np.ix_(rows, cols)] = cyclic_extension(block, pattern.dims)
    else:
        out[pilot_mask(pattern.dims, cfg)] = block.reshape(-1)
    return out


def extract_received_pilots(Y_dd: ComplexArray, dims: PilotDims, cfg: OtfsConfig) -> ComplexArray:
    """Read the received pilot block into y, row = ℓ·N_nu + k + N_nu/2."""
    Y_dd = np.asarray(Y_dd, dtype=complex)
    if Y_dd.shape != (cfg.M, cfg.N):
        raise DimensionError(f"received frame shape {Y_dd.shape} != {(cfg.M, cfg.N)}")
    c0 = cfg.N // 2 - dims.N_nu // 2
    return Y_dd[: dims.M_tau, c0 : c0 + dims.N_nu].reshape(-1).copy()


def angle_transform_pilots(pilots: ComplexArray) -> ComplexArray:
    """z_{ℓ,k,r} = (1/N_t) Σ_p e^{-j2πrp/N_t} x_{ℓ,k,p}, angle axis centered.

    The 1/N_t factor is the reconstruction scale pairing the unnormalized
    delay-Doppler-angle transform with its inverse.
    """
    pilots = np.asarray(pilots, dtype=complex)
    n_t = pilots.shape[2]
    if n_t % 2:
        raise DimensionError(f"N_t must be even, got {n_t}")
    return fft.fftshift(fft.fft(pilots, axis=2), axes=2) / n_t


def _grids(dims: PilotDims):
    ell = np.repeat(np.arange(dims.M_tau), dims.N_nu)
    k = np.tile(np.arange(dims.N_nu) - dims.N_nu // 2, dims.M_tau)
    ell_c = np.repeat(np.arange(dims.M_g), dims.N_g)
    k_c = np.tile(np.arange(dims.N_g) - dims.N_g // 2, dims.M_g)
    return ell, k, ell_c, k_c


def build_phase_matrix(dims: PilotDims, cfg: OtfsConfig) -> ComplexArray:
    """W[row(ℓ,k), col(ℓ',k')] = e^{j2π(ℓ-ℓ')k'/(N(M+N_cp))}."""
    ell, _, ell_c, k_c = _grids(dims)
    delta = np.subtract.outer(ell, ell_c)
    return np.exp(2j * np.pi * delta * k_c[None, :] / (cfg.N * cfg.symbol_length))


def build_conv_matrix(
    z: ComplexArray, dims: PilotDims, r: int, periodic: bool = False
) -> ComplexArray:
    """Z_{c,r}[row(ℓ,k), col(ℓ',k')] = z_{ℓ-ℓ', k-k', r}.

    Source indices outside the pilot block wrap modulo (M_tau, N_nu) when
    ``periodic``, and give zero otherwise.
    """
    n_t = z.shape[2]
    if not -n_t // 2 <= r < n_t // 2:
        raise ArgumentError(f"angle index {r} out of range for N_t={n_t}")
    ell, k, ell_c, k_c = _grids(dims)
    src_ell = np.subtract.outer(ell, ell_c)
    src_k = np.subtract.outer(k, k_c) + dims.N_nu // 2
    if periodic:
        src_ell, src_k = src_ell % dims.M_tau, src_k % dims.N_nu
    inside = (src_ell >= 0) & (src_ell < dims.M_tau) & (src_k >= 0) & (src_k < dims.N_nu)
    block = z[:, :, r + n_t // 2]
    out = np.zeros(src_ell.shape, dtype=complex)
    out[inside] = block[src_ell[inside], src_k[inside]]
    return out


def assemble_sensing(W: ComplexArray, conv_blocks: Sequence[ComplexArray]) -> ComplexArray:
    """Psi = [W ⊙ Z_{c,-N_t/2}, ..., W ⊙ Z_{c,N_t/2-1}]."""
    for block in conv_blocks:
        if block.shape != W.shape:
            raise DimensionError(f"convolution block {block.shape} != phase matrix {W.shape}")
    return np.hstack([W * block for block in conv_blocks])


def build_sensing_matrix(pattern: PilotPattern, cfg: OtfsConfig) -> ComplexArray:
    z = angle_transform_pilots(pattern.pilots)
    W = build_phase_matrix(pattern.dims, cfg)
    n_t = pattern.n_t
    return assemble_sensing(
        W,
        [
            build_conv_matrix(z, pattern.dims, r, periodic=pattern.cyclic)
            for r in range(-n_t // 2, n_t // 2)
        ],
    )


def sensing_system(Y_dd: ComplexArray, pattern: PilotPattern, cfg: OtfsConfig) -> SensingSystem:
    """Measurement vector from a channel-scaled received frame plus the sensing matrix."""
    return SensingSystem(
        y=extract_received_pilots(Y_dd, pattern.dims, cfg),
        psi=build_sensing_matrix(pattern, cfg),
        dims=pattern.dims,
        n_t=pattern.n_t,
    )
