"""Module: otfs_bench.core.estimators.metrics

Normalized mean square error of channel estimates.
"""

import numpy as np

from otfs_bench.exceptions import DimensionError, EstimationError
from otfs_bench.types import ComplexArray


def _ratio(H_hat: ComplexArray, H_true: ComplexArray) -> float:
    H_hat = np.asarray(H_hat)
    H_true = np.asarray(H_true)
    if H_hat.shape != H_true.shape:
        raise DimensionError(f"estimate shape {H_hat.shape} != truth shape {H_true.shape}")
    energy = float(np.sum(np.abs(H_true) ** 2))
    if energy == 0.0:
        raise EstimationError("NMSE is undefined for a zero-energy channel")
    return float(np.sum(np.abs(H_hat - H_true) ** 2)) / energy


def nmse_dd(H_hat: ComplexArray, H_true: ComplexArray) -> float:
    """NMSE of one M×N delay-Doppler channel."""
    if np.ndim(H_true) != 2:
        raise DimensionError(f"expected an M×N matrix, got shape {np.shape(H_true)}")
    return _ratio(H_hat, H_true)


def nmse_dda(H_hat: ComplexArray, H_true: ComplexArray) -> float:
    """Frobenius NMSE of a whole delay-Doppler-angle tensor."""
    return _ratio(H_hat, H_true)


def nmse_per_antenna(H_hat: ComplexArray, H_true: ComplexArray) -> float:
    """Per-antenna delay-Doppler NMSE averaged over the last (antenna) axis."""
    if np.shape(H_hat) != np.shape(H_true) or np.ndim(H_true) != 3:
        raise DimensionError(f"expected matching M×N×N_t tensors, got {np.shape(H_hat)}")
    return float(np.mean([nmse_dd(H_hat[..., p], H_true[..., p]) for p in range(H_true.shape[2])]))
