"""Module: otfs_bench.core.estimators.lifting

Lifting transformation turning a cyclic angle burst into a block-sparse argmax.
"""

import numpy as np

from otfs_bench.exceptions import ArgumentError
from otfs_bench.types import RealArray


def lifting_index(i: int, j: int, n_t: int) -> int:
    """Cyclic sum i ⊕ j of 1-based indices: i + j, minus N_t when it exceeds N_t."""
    if not 1 <= i <= n_t or not 1 <= j <= n_t:
        raise ArgumentError(f"lifting indices ({i}, {j}) out of range for N_t={n_t}")
    total = i + j
    return total if total <= n_t else total - n_t


def build_lifting_matrix(n_t: int, D: int) -> np.ndarray:
    """N_t × N_t·D 0/1 matrix; column (i-1)D + j has its one at row i ⊕ j."""
    if not 1 <= D <= n_t:
        raise ArgumentError(f"burst length D={D} must lie in [1, {n_t}]")
    lifted = np.zeros((n_t, n_t * D), dtype=np.int8)
    for i in range(1, n_t + 1):
        for j in range(1, D + 1):
            lifted[lifting_index(i, j, n_t) - 1, (i - 1) * D + j - 1] = 1
    return lifted


def burst_start(e_theta: RealArray, D: int, lifted: np.ndarray = None) -> int:
    """0-based start of the length-D cyclic window holding the most energy of e_theta.

    Row i of the reshaped lifted vector covers positions i+1 .. i+D (mod N_t).
    """
    e_theta = np.asarray(e_theta)
    n_t = e_theta.shape[0]
    if lifted is None:
        lifted = build_lifting_matrix(n_t, D)
    rows = (lifted.T @ e_theta).reshape(n_t, D)
    return (int(np.argmax(np.linalg.norm(rows, axis=1))) + 1) % n_t


def burst_indices(start: int, D: int, n_t: int) -> np.ndarray:
    return (start + np.arange(D)) % n_t
