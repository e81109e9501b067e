"""Module: otfs_bench.core.estimators.solvers

Least-squares solves on selected sensing-matrix columns.
"""

from typing import Tuple

import numpy as np
from scipy import linalg

from otfs_bench.constants import COND_LIMIT, TIKHONOV_SCALE
from otfs_bench.types import ComplexArray


def least_squares(A: ComplexArray, y: ComplexArray) -> Tuple[ComplexArray, bool]:
    """Solve min ‖A x - y‖ by QR; fall back to Tikhonov when the Gram matrix is ill-conditioned.

    Returns:
        (x, regularized) where ``regularized`` tells whether the fallback was used.
    """
    m, n = A.shape
    if n == 0:
        return np.zeros(0, dtype=complex), False
    if n <= m:
        Q, R = linalg.qr(A, mode="economic")
        singular_values = linalg.svdvals(R)
        smallest = singular_values[-1]
        if smallest > 0 and (singular_values[0] / smallest) ** 2 <= COND_LIMIT:
            return linalg.solve_triangular(R, Q.conj().T @ y), False

    gram = A.conj().T @ A
    lam = TIKHONOV_SCALE * max(np.real(np.trace(gram)), np.finfo(float).tiny) / n
    x = linalg.solve(gram + lam * np.eye(n), A.conj().T @ y, assume_a="pos")
    return x, True
