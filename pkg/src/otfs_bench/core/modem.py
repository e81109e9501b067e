"""Module: otfs_bench.core.modem

Discrete-time OTFS modulation and demodulation.

The delay axis is the row axis of every M×N frame and the Doppler axis is the
column axis, stored centered (column c holds Doppler index k = c - N/2). All
DFTs are unitary. Cyclic-prefix insertion and removal are index maps.
"""

from typing import Optional, Sequence

import numpy as np
from scipy import fft

from otfs_bench.exceptions import ConfigurationError, DimensionError
from otfs_bench.types import ComplexArray, OtfsConfig, TapChannel


def _check_grid(X: ComplexArray, shape: Optional[tuple] = None) -> ComplexArray:
    X = np.asarray(X, dtype=complex)
    if X.ndim != 2:
        raise DimensionError(f"expected a 2-D grid, got shape {X.shape}")
    if shape is not None and X.shape != shape:
        raise DimensionError(f"expected shape {shape}, got {X.shape}")
    return X


def isfft(X_dd: ComplexArray) -> ComplexArray:
    """Inverse symplectic finite Fourier transform F_M · X · F_N^H."""
    X_dd = _check_grid(X_dd)
    return fft.ifft(fft.fft(X_dd, axis=0, norm="ortho"), axis=1, norm="ortho")


def sfft(Y: ComplexArray) -> ComplexArray:
    """Symplectic finite Fourier transform F_M^H · Y · F_N, the inverse of isfft."""
    Y = _check_grid(Y)
    return fft.fft(fft.ifft(Y, axis=0, norm="ortho"), axis=1, norm="ortho")


def otfs_modulate(X_dd: ComplexArray, cfg: OtfsConfig) -> ComplexArray:
    """Map a delay-Doppler frame to the time-domain sample vector.

    Args:
        X_dd: M×N delay-Doppler frame.
        cfg: Frame configuration.

    Returns:
        Complex vector of length (M + N_cp)·N: per-symbol cyclic prefix
        followed by the M samples of that symbol, symbols concatenated.
    """
    X_dd = _check_grid(X_dd, (cfg.M, cfg.N))
    # F_M^H · F_M cancels, leaving X · F_N^H
    S = fft.ifft(X_dd, axis=1, norm="ortho")
    S_cp = np.concatenate([S[cfg.M - cfg.N_cp :, :], S], axis=0)
    return S_cp.reshape(-1, order="F")


def otfs_demodulate(
    r: ComplexArray, cfg: OtfsConfig, channel_scaled: bool = False
) -> ComplexArray:
    """Map received samples back to the delay-Doppler grid.

    With ``channel_scaled`` the unitary output is multiplied by N, which puts
    the received frame on the scale of ``compute_h_dd`` and ``lemma1_predict``.
    """
    r = np.asarray(r, dtype=complex)
    if r.ndim != 1 or r.shape[0] != cfg.frame_length:
        raise DimensionError(
            f"expected {cfg.frame_length} samples, got shape {r.shape}"
        )
    R = r.reshape(cfg.symbol_length, cfg.N, order="F")[cfg.N_cp :, :]
    Y = fft.fft(R, axis=1, norm="ortho")
    return Y * cfg.N if channel_scaled else Y


def complex_awgn(size: int, noise_power: float, rng: np.random.Generator) -> ComplexArray:
    """Circularly-symmetric complex Gaussian noise of the given variance."""
    scale = np.sqrt(noise_power / 2.0)
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


def apply_channel(
    s: ComplexArray, ch: TapChannel, noise_power: float = 0.0, seed: Optional[int] = None
) -> ComplexArray:
    """Pass samples through a linear time-variant tap channel.

    r_κ = Σ_ℓ h_{κ,ℓ} s_{κ-ℓ} + v_κ with zero samples before the frame.
    """
    s = np.asarray(s, dtype=complex)
    if noise_power < 0:
        raise ConfigurationError(f"noise_power must be >= 0, got {noise_power}")
    n = s.shape[0]
    if ch.n_samples < n:
        raise ConfigurationError(
            f"tap array covers {ch.n_samples} samples but the frame has {n}"
        )
    taps = ch.taps[:n]
    r = taps[:, 0] * s
    for ell in range(1, min(ch.L, n - 1) + 1):
        r[ell:] += taps[ell:, ell] * s[: n - ell]
    if noise_power > 0:
        r = r + complex_awgn(n, noise_power, np.random.default_rng(seed))
    return r


def superpose_channels(
    signals: Sequence[ComplexArray],
    channels: Sequence[TapChannel],
    noise_power: float = 0.0,
    seed: Optional[int] = None,
) -> ComplexArray:
    """Single receive antenna observing every transmit antenna through its own taps."""
    if len(signals) != len(channels):
        raise DimensionError(f"{len(signals)} signals but {len(channels)} channels")
    r = sum(apply_channel(s, ch) for s, ch in zip(signals, channels))
    if noise_power > 0:
        r = r + complex_awgn(r.shape[0], noise_power, np.random.default_rng(seed))
    return r


def compute_h_dd(ch: TapChannel, cfg: OtfsConfig) -> ComplexArray:
    """Delay-Doppler channel H^DD from taps sampled at each symbol start.

    H^DD_{ℓ,k} = Σ_i h_{(i-1)(M+N_cp)+1, ℓ} e^{-j2π(i-1)k/N}, an unnormalized N-term sum.
    """
    starts = np.arange(cfg.N) * cfg.symbol_length
    if ch.n_samples <= starts[-1]:
        raise ConfigurationError(
            f"tap array covers {ch.n_samples} samples, need {starts[-1] + 1}"
        )
    if ch.L >= cfg.M:
        raise DimensionError(f"channel length {ch.L} exceeds the delay axis M={cfg.M}")
    sampled = np.zeros((cfg.M, cfg.N), dtype=complex)
    sampled[: ch.L + 1, :] = ch.taps[starts, :].T
    doppler = np.arange(cfg.N) - cfg.N // 2
    kernel = np.exp(-2j * np.pi * np.outer(np.arange(cfg.N), doppler) / cfg.N)
    return sampled @ kernel


def wrap_doppler(k: np.ndarray, N: int) -> np.ndarray:
    """Wrap signed Doppler indices into [-N/2, N/2 - 1]."""
    return (np.asarray(k) + N // 2) % N - N // 2


def lemma1_predict(X_dd: ComplexArray, H_dd: ComplexArray, cfg: OtfsConfig) -> ComplexArray:
    """Phase-compensated 2-D periodic convolution of a frame with H^DD.

    Y_{ℓ,k} = Σ X_{ℓ',k'} H_{ℓ-ℓ', k-k'} e^{j2πℓ(k-k')/(N(M+N_cp))}, with the Doppler
    difference taken periodically in [-N/2, N/2 - 1].
    """
    X_dd = _check_grid(X_dd, (cfg.M, cfg.N))
    H_dd = _check_grid(H_dd, (cfg.M, cfg.N))
    FX = fft.fft(X_dd, axis=0)
    FH = fft.fft(H_dd, axis=0)
    rows = np.arange(cfg.M)
    Y = np.zeros((cfg.M, cfg.N), dtype=complex)
    for d in range(-cfg.N // 2, cfg.N // 2):
        column = FH[:, d + cfg.N // 2]
        if not np.any(column):
            continue
        conv = fft.ifft(column[:, None] * np.roll(FX, d, axis=1), axis=0)
        phase = np.exp(2j * np.pi * rows * d / (cfg.N * cfg.symbol_length))
        Y += phase[:, None] * conv
    return Y
