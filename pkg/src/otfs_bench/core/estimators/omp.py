"""Module: otfs_bench.core.estimators.omp

Orthogonal matching pursuit over single sensing-matrix columns.
"""

from typing import Optional, Tuple

import numpy as np

from otfs_bench.constants import ESTIMATOR_OMP, FLAG_REGULARIZED
from otfs_bench.core.channel import default_burst_length
from otfs_bench.core.estimators.base import (BaseEstimator, EstimationProblem, EstimatorKind,
                                             EstimatorSpec)
from otfs_bench.core.estimators.solvers import least_squares
from otfs_bench.exceptions import ArgumentError, DimensionError
from otfs_bench.types import ComplexArray, EstimateRecord, SupportSet, column_triple


def make_support(columns, dims: Optional[Tuple[int, int, int]] = None) -> SupportSet:
    columns = tuple(sorted(set(int(c) for c in columns)))
    triples = frozenset(column_triple(c, *dims) for c in columns) if dims else frozenset()
    return SupportSet(columns=columns, triples=triples)


def omp(
    y: ComplexArray,
    psi: ComplexArray,
    K: int,
    dims: Optional[Tuple[int, int, int]] = None,
) -> EstimateRecord:
    """Run K iterations of OMP.

    Atoms are scored by |ψ_jᴴ r| / ‖ψ_j‖, the correlation normalized by column norm.

    Args:
        y: Measurement vector.
        psi: Sensing matrix.
        K: Number of atoms to select.
        dims: Optional (M_g, N_g, N_t) used to report support triples.

    Returns:
        EstimateRecord with h_hat supported on the K selected columns.
    """
    y = np.asarray(y, dtype=complex)
    m, n = psi.shape
    if y.shape != (m,):
        raise DimensionError(f"measurement length {y.shape} does not match Psi rows {m}")
    if not 1 <= K <= min(m, n):
        raise ArgumentError(f"sparsity K={K} must lie in [1, {min(m, n)}]")

    norms = np.linalg.norm(psi, axis=0)
    norms[norms == 0] = np.inf
    selected = []
    residual = y.copy()
    coefficients = np.zeros(0, dtype=complex)
    regularized = False
    for _ in range(K):
        scores = np.abs(psi.conj().T @ residual) / norms
        scores[selected] = -1.0
        selected.append(int(np.argmax(scores)))
        coefficients, reg = least_squares(psi[:, selected], y)
        regularized |= reg
        residual = y - psi[:, selected] @ coefficients

    h_hat = np.zeros(n, dtype=complex)
    h_hat[selected] = coefficients
    flags = [FLAG_REGULARIZED] if regularized else []
    return EstimateRecord(
        h_hat=h_hat,
        support=make_support(selected, dims),
        meta={"flags": flags, "residual_norm": float(np.linalg.norm(residual)), "K": K},
    )


class OmpEstimator(BaseEstimator):
    """Unstructured OMP with sparsity matched to the structured model."""

    def __init__(self, params=None):
        super().__init__(
            EstimatorSpec(
                id=ESTIMATOR_OMP,
                label="OMP",
                kind=EstimatorKind.DELAY_DOPPLER_ANGLE,
                description="Orthogonal matching pursuit on single columns",
            ),
            params,
        )

    def sparsity(self, problem: EstimationProblem) -> int:
        """K from params, else N_p · N_max · D clipped to the measurement count."""
        if self.params.get("K"):
            return int(self.params["K"])
        D = int(self.params.get("D") or default_burst_length(problem.n_t))
        n_paths = int(self.params.get("N_p") or problem.n_paths)
        rows = problem.system.psi.shape[0]
        return max(1, min(n_paths * problem.support.N_max * D, rows))

    def _estimate(self, problem: EstimationProblem) -> EstimateRecord:
        system = problem.system
        dims = (system.dims.M_g, system.dims.N_g, system.n_t)
        return omp(system.y, system.psi, self.sparsity(problem), dims)
