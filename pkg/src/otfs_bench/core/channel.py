"""Module: otfs_bench.core.channel

Clustered multipath MIMO channel model.

Generates path sets (dominant paths made of subpaths sharing one delay),
the per-antenna time-variant taps they induce, and the delay-Doppler-space
and delay-Doppler-angle tensors with their truncated, vectorized form.
Angle axes are stored centered (index r + N_t/2), like the Doppler axis.
"""

import math
from typing import List, Optional

import numpy as np
from scipy import fft

from otfs_bench.constants import DEFAULT_ROLLOFF, SUPPORT_MARGIN, UPSILON_SINGULAR_TOL
from otfs_bench.exceptions import ConfigurationError, DimensionError
from otfs_bench.types import (ChannelGenParams, ChannelSupport, ComplexArray, DdaChannel,
                              DominantPath, OtfsConfig, PathSet, RealArray, Subpath, TapChannel)


def upsilon(x, N: int):
    """Υ_N(x) = Σ_{n=1}^{N} e^{j2πx(n-1)/N}, evaluated in closed form.

    Near the removable singularities x ≡ 0 (mod N) the direct sum is used.
    """
    x = np.asarray(x, dtype=float)
    shape = x.shape
    x = x.reshape(-1)
    denominator = np.sin(np.pi * x / N)
    singular = np.abs(denominator) < UPSILON_SINGULAR_TOL
    safe = np.where(singular, 1.0, denominator)
    value = np.sin(np.pi * x) / safe * np.exp(1j * np.pi * x * (N - 1) / N)
    if np.any(singular):
        n = np.arange(N)
        value[singular] = np.exp(2j * np.pi * np.outer(x[singular], n) / N).sum(axis=1)
    if not shape:
        return complex(value[0])
    return value.reshape(shape)


def raised_cosine(t, T_s: float, rolloff: float, support: Optional[float] = None) -> RealArray:
    """Raised-cosine pulse with unit peak, zero outside |t| <= support."""
    u = np.asarray(t, dtype=float) / T_s
    edge = 2.0 * rolloff * u
    singular = np.isclose(np.abs(edge), 1.0)
    safe = np.where(singular, 0.0, edge)
    pulse = np.sinc(u) * np.cos(np.pi * rolloff * u) / (1.0 - safe**2)
    if rolloff > 0:
        pulse = np.where(singular, np.pi / 4.0 * np.sinc(1.0 / (2.0 * rolloff)), pulse)
    if support is not None:
        pulse = np.where(np.abs(np.asarray(t, dtype=float)) <= support + 1e-12 * T_s, pulse, 0.0)
    return pulse


def default_burst_length(n_t: int) -> int:
    """Angle-burst length D = max(1, round(N_t / 10))."""
    return max(1, int(round(n_t / 10)))


def default_angle_spread(n_t: int) -> float:
    return default_burst_length(n_t) / (2.0 * n_t)


def max_doppler(params: ChannelGenParams, cfg: OtfsConfig) -> float:
    """Doppler span ν_max = 2v/λ."""
    return 2.0 * params.v / cfg.wavelength


def channel_support(params: ChannelGenParams, cfg: OtfsConfig) -> ChannelSupport:
    """Delay/Doppler support with leakage margin; N_max is rounded up to even."""
    M_max = math.ceil(params.tau_max * cfg.M * cfg.delta_f - 1e-9) + SUPPORT_MARGIN
    N_max = math.ceil(max_doppler(params, cfg) * cfg.N * cfg.T - 1e-9) + SUPPORT_MARGIN
    N_max += N_max % 2
    return ChannelSupport(M_max=min(M_max, cfg.M), N_max=min(N_max, cfg.N))


def validate_params(params: ChannelGenParams, cfg: OtfsConfig) -> None:
    if params.N_p < 1 or params.N_s < 1:
        raise ConfigurationError(f"N_p and N_s must be >= 1, got {params.N_p}, {params.N_s}")
    if params.v < 0:
        raise ConfigurationError(f"speed must be >= 0, got {params.v}")
    if not 0.0 <= params.rolloff <= 1.0:
        raise ConfigurationError(f"rolloff must lie in [0, 1], got {params.rolloff}")
    if params.tau_max < 0 or params.tau_max >= cfg.N_cp * cfg.T_s:
        raise ConfigurationError(
            f"tau_max={params.tau_max:.3e}s must lie in [0, N_cp·T_s={cfg.N_cp * cfg.T_s:.3e}s)"
        )
    if params.angle_spread is not None and not 0.0 <= params.angle_spread < 0.25:
        raise ConfigurationError(f"angle_spread must lie in [0, 0.25), got {params.angle_spread}")


def generate_path_set(
    params: ChannelGenParams, cfg: OtfsConfig, seed: int, n_t: Optional[int] = None
) -> PathSet:
    """Draw one clustered multipath realization, deterministic in seed.

    Args:
        params: Generator parameters.
        cfg: Frame configuration (sets T_s, T and the carrier wavelength).
        seed: Random seed.
        n_t: Antenna count; needed for the default angle spread and on-grid angles.

    Returns:
        PathSet with paths sorted by delay, path i carrying power ∝ e^{-pdp_decay·i}.
    """
    validate_params(params, cfg)
    if (params.angle_spread is None or params.on_grid) and n_t is None:
        raise ConfigurationError("n_t is required for the default angle spread and on-grid angles")
    spread = params.angle_spread if params.angle_spread is not None else default_angle_spread(n_t)
    rng = np.random.default_rng(seed)

    taus = np.sort(rng.uniform(0.0, params.tau_max, params.N_p))
    means = rng.uniform(-0.5 + spread, 0.5 - spread, params.N_p)
    powers = np.exp(-params.pdp_decay * np.arange(1, params.N_p + 1))
    powers /= powers.sum()
    nu_peak = params.v / cfg.wavelength

    paths = []
    for i in range(params.N_p):
        psi = means[i] + rng.uniform(-spread, spread, params.N_s)
        nu = nu_peak * np.sin(rng.uniform(-np.pi / 2, np.pi / 2, params.N_s))
        scale = np.sqrt(powers[i] / params.N_s / 2.0)
        alpha = scale * (rng.standard_normal(params.N_s) + 1j * rng.standard_normal(params.N_s))
        tau = taus[i]
        if params.on_grid:
            tau = np.floor(tau / cfg.T_s) * cfg.T_s
            nu = np.round(nu * cfg.N * cfg.T) / (cfg.N * cfg.T)
            psi = np.round(psi * n_t) / n_t
        psi = (psi + 0.5) % 1.0 - 0.5
        subpaths = tuple(
            Subpath(alpha=complex(a), nu=float(f), psi=float(s)) for a, f, s in zip(alpha, nu, psi)
        )
        paths.append(DominantPath(tau=float(tau), subpaths=subpaths))
    return PathSet(paths=tuple(paths))


def _tap_tensor(
    ps: PathSet, cfg: OtfsConfig, L: int, antennas: np.ndarray, rolloff: float
) -> ComplexArray:
    """Taps h[κ-1, ℓ, p] for κ = 1..(M+N_cp)N, ℓ = 0..L and the given antennas."""
    tau, alpha, nu, psi = ps.flatten()
    kappa = np.arange(1, cfg.frame_length + 1)
    doppler = alpha[None, :] * np.exp(2j * np.pi * np.outer(kappa, nu) * cfg.T_s)
    delay = raised_cosine(
        np.subtract.outer(np.arange(L + 1) * cfg.T_s, tau).T, cfg.T_s, rolloff, L * cfg.T_s
    )
    angle = np.exp(-2j * np.pi * np.outer(psi, antennas))
    return np.einsum("ks,sl,sp->klp", doppler, delay, angle, optimize=True)


def _check_length(cfg: OtfsConfig, L: int) -> None:
    if L < 0 or L >= max(cfg.N_cp, 1):
        raise ConfigurationError(f"channel length L={L} must satisfy 0 <= L < N_cp={cfg.N_cp}")


def time_variant_taps(
    ps: PathSet, cfg: OtfsConfig, L: int, p: int, rolloff: float = DEFAULT_ROLLOFF
) -> TapChannel:
    """Taps seen from transmit antenna p."""
    _check_length(cfg, L)
    taps = _tap_tensor(ps, cfg, L, np.array([p]), rolloff)
    return TapChannel(taps=taps[:, :, 0])


def array_taps(
    ps: PathSet, cfg: OtfsConfig, L: int, n_t: int, rolloff: float = DEFAULT_ROLLOFF
) -> List[TapChannel]:
    """Taps for every antenna 0..n_t-1 in one vectorized pass."""
    _check_length(cfg, L)
    taps = _tap_tensor(ps, cfg, L, np.arange(n_t), rolloff)
    return [TapChannel(taps=np.ascontiguousarray(taps[:, :, p])) for p in range(n_t)]


def dds_cir(
    ps: PathSet,
    cfg: OtfsConfig,
    n_t: int,
    L: Optional[int] = None,
    rolloff: float = DEFAULT_ROLLOFF,
) -> ComplexArray:
    """Delay-Doppler-space CIR H^DDS (M×N×N_t) in closed form.

    Taps beyond L are zero and the pulse is truncated to |t| <= L·T_s, exactly as
    in ``time_variant_taps``, so each antenna slice equals compute_h_dd of its taps.
    """
    L = cfg.N_cp - 1 if L is None else L
    _check_length(cfg, L)
    tau, alpha, nu, psi = ps.flatten()
    beta = alpha * np.exp(2j * np.pi * nu * cfg.T_s)
    doppler = np.arange(cfg.N) - cfg.N // 2
    profile = upsilon(np.subtract.outer(nu * cfg.N * cfg.T, doppler), cfg.N)
    delay = np.zeros((tau.shape[0], cfg.M))
    delay[:, : L + 1] = raised_cosine(
        np.subtract.outer(np.arange(L + 1) * cfg.T_s, tau).T, cfg.T_s, rolloff, L * cfg.T_s
    )
    angle = np.exp(-2j * np.pi * np.outer(psi, np.arange(n_t)))
    return np.einsum("s,sk,sl,sp->lkp", beta, profile, delay, angle, optimize=True)


def dda_channel(dds: ComplexArray) -> DdaChannel:
    """H^DDA_{ℓ,k,r} = Σ_p H^DDS_{ℓ,k,p} e^{j2πrp/N_t}, angle axis centered."""
    dds = np.asarray(dds, dtype=complex)
    if dds.ndim != 3:
        raise DimensionError(f"expected an M×N×N_t tensor, got shape {dds.shape}")
    n_t = dds.shape[2]
    if n_t % 2:
        raise DimensionError(f"N_t must be even, got {n_t}")
    tensor = fft.fftshift(fft.ifft(dds, axis=2) * n_t, axes=2)
    return DdaChannel(tensor=tensor)


def dds_from_dda(dda: DdaChannel) -> ComplexArray:
    """Inverse of dda_channel: (1/N_t) Σ_r H^DDA_r e^{-j2πrp/N_t}."""
    return fft.fft(fft.ifftshift(dda.tensor, axes=2), axis=2) / dda.n_t


def truncate_and_vectorize(dda: DdaChannel, M_g: int, N_g: int) -> ComplexArray:
    """Vectorize the truncated tensor: angle blocks ascending, ℓ'·N_g + k' + N_g/2 within."""
    M, N, _ = dda.tensor.shape
    if M_g > M or N_g > N or M_g < 1 or N_g < 2 or N_g % 2:
        raise DimensionError(f"truncation {M_g}×{N_g} does not fit an {M}×{N} channel")
    return dda.truncated(M_g, N_g).transpose(2, 0, 1).reshape(-1).copy()


def invec(h: ComplexArray, M_g: int, N_g: int, n_t: int) -> ComplexArray:
    """Rebuild the M_g×N_g×N_t truncated tensor from its vector form."""
    h = np.asarray(h)
    if h.shape != (M_g * N_g * n_t,):
        raise DimensionError(f"expected a vector of length {M_g * N_g * n_t}, got {h.shape}")
    return h.reshape(n_t, M_g, N_g).transpose(1, 2, 0).copy()


def embed_truncated(truncated: ComplexArray, M: int, N: int) -> ComplexArray:
    """Place a truncated tensor back into a zero M×N×N_t tensor."""
    M_g, N_g, n_t = truncated.shape
    full = np.zeros((M, N, n_t), dtype=complex)
    full[:M_g, N // 2 - N_g // 2 : N // 2 + N_g // 2, :] = truncated
    return full
