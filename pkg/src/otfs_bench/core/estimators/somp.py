"""Module: otfs_bench.core.estimators.somp

Structured matching pursuit exploiting delay sparsity, Doppler block sparsity
and angle burst sparsity of the truncated delay-Doppler-angle channel.

Each iteration picks one delay bin, a centered Doppler block sized by an
energy threshold, and a cyclic angle burst located through the lifting
matrix, then re-fits all selected columns by least squares.

With ``max_iter`` set the pursuit keeps going past N_p iterations and returns
the iterate (N_p or later) with the lowest generalized cross-validation score.
"""

from typing import Tuple

import numpy as np

from otfs_bench.constants import (DEFAULT_EPSILON, ESTIMATOR_SOMP3D, FLAG_REGULARIZED,
                                 FLAG_SUPPORT_OVERFLOW, SOMP_ITERATION_FACTOR)
from otfs_bench.core.channel import default_burst_length, invec
from otfs_bench.core.estimators.base import (BaseEstimator, EstimationProblem, EstimatorKind,
                                             EstimatorSpec)
from otfs_bench.core.estimators.lifting import build_lifting_matrix, burst_indices, burst_start
from otfs_bench.core.estimators.omp import make_support
from otfs_bench.core.estimators.solvers import least_squares
from otfs_bench.exceptions import ArgumentError, DimensionError
from otfs_bench.types import ComplexArray, EstimateRecord, RealArray, SomppParams


def doppler_half_width(e_nu: RealArray, epsilon: float) -> int:
    """Smallest n whose centered block [N_g/2-n, N_g/2+n-1] holds epsilon of ‖e_nu‖."""
    half = e_nu.shape[0] // 2
    total = np.linalg.norm(e_nu)
    for n in range(1, half + 1):
        if np.linalg.norm(e_nu[half - n : half + n]) >= epsilon * total:
            return n
    return half


def gcv_score(residual_norm: float, support_size: int, m: int) -> float:
    """‖r‖² / (1 - |Ω|/m)², infinite once the support fills the measurements."""
    if support_size >= m:
        return float("inf")
    return residual_norm**2 / (1.0 - support_size / m) ** 2


def somp3d(
    y: ComplexArray,
    psi: ComplexArray,
    dims: Tuple[int, int, int],
    params: SomppParams,
) -> EstimateRecord:
    """Estimate the vectorized truncated channel.

    Args:
        y: Measurement vector.
        psi: Sensing matrix whose columns follow the (angle, delay, Doppler) vector order.
        dims: (M_g, N_g, N_t).
        params: Path count, burst length, Doppler threshold and optional iteration cap.

    Returns:
        EstimateRecord with the LS fit on the accumulated support. ``meta`` holds
        flags, per-iteration residual norms and support sizes, the chosen (delay, half-width, start)
        and the 1-based iteration whose support was kept.
    """
    M_g, N_g, n_t = dims
    y = np.asarray(y, dtype=complex)
    m, n = psi.shape
    if n != M_g * N_g * n_t:
        raise DimensionError(f"Psi has {n} columns, expected {M_g}·{N_g}·{n_t}")
    if y.shape != (m,):
        raise DimensionError(f"measurement length {y.shape} does not match Psi rows {m}")
    if params.D > n_t:
        raise ArgumentError(f"burst length D={params.D} exceeds N_t={n_t}")

    lifted = build_lifting_matrix(n_t, params.D)
    block = M_g * N_g
    residual = y.copy()
    omega: set = set()
    flags = set()
    residuals = [float(np.linalg.norm(y))]
    picks = []
    iterates = []

    for _ in range(params.max_iter or params.N_p):
        E = invec(psi.conj().T @ residual, M_g, N_g, n_t)
        m_tau = int(np.argmax(np.linalg.norm(E.reshape(M_g, -1), axis=1)))
        e_nu = np.linalg.norm(E[m_tau], axis=1)
        n_nu = doppler_half_width(e_nu, params.epsilon)
        lam_nu = np.arange(N_g // 2 - n_nu, N_g // 2 + n_nu)
        e_theta = np.linalg.norm(E[m_tau, lam_nu, :], axis=0)
        start = burst_start(e_theta, params.D, lifted)
        lam_theta = burst_indices(start, params.D, n_t)

        new = {int(r * block + m_tau * N_g + k) for r in lam_theta for k in lam_nu}
        if new <= omega:
            break
        if len(omega | new) > m:
            flags.add(FLAG_SUPPORT_OVERFLOW)
            break
        omega |= new
        picks.append((m_tau, n_nu, int(start) - n_t // 2))

        columns = sorted(omega)
        coefficients, reg = least_squares(psi[:, columns], y)
        residual = y - psi[:, columns] @ coefficients
        residuals.append(float(np.linalg.norm(residual)))
        iterates.append((columns, coefficients, reg))
        if params.residual_tol is not None and residuals[-1] <= params.residual_tol * residuals[0]:
            break

    selected = len(iterates) - 1
    if params.max_iter is not None and len(iterates) > params.N_p:
        scores = [
            gcv_score(residuals[i + 1], len(iterates[i][0]), m)
            for i in range(params.N_p - 1, len(iterates))
        ]
        selected = params.N_p - 1 + int(np.argmin(scores))

    h_hat = np.zeros(n, dtype=complex)
    kept: list = []
    if iterates:
        kept, coefficients, reg = iterates[selected]
        h_hat[kept] = coefficients
        if reg:
            flags.add(FLAG_REGULARIZED)
    return EstimateRecord(
        h_hat=h_hat,
        support=make_support(kept, dims),
        meta={
            "flags": sorted(flags),
            "residuals": residuals,
            "picks": picks,
            "support_sizes": [len(iterate[0]) for iterate in iterates],
            "selected_iteration": selected + 1,
        },
    )


class Somp3dEstimator(BaseEstimator):
    """Structured matching pursuit over (delay, Doppler block, angle burst) supports."""

    def __init__(self, params=None):
        super().__init__(
            EstimatorSpec(
                id=ESTIMATOR_SOMP3D,
                label="3D-SOMP",
                kind=EstimatorKind.DELAY_DOPPLER_ANGLE,
                description="Delay / Doppler-block / angle-burst structured pursuit",
            ),
            params,
        )

    def somp_params(self, problem: EstimationProblem) -> SomppParams:
        n_paths = int(self.params.get("N_p") or problem.n_paths)
        return SomppParams(
            N_p=n_paths,
            D=int(self.params.get("D") or default_burst_length(problem.n_t)),
            epsilon=float(self.params.get("epsilon") or DEFAULT_EPSILON),
            residual_tol=self.params.get("residual_tol"),
            max_iter=int(self.params.get("max_iter") or SOMP_ITERATION_FACTOR * n_paths),
        )

    def _estimate(self, problem: EstimationProblem) -> EstimateRecord:
        system = problem.system
        dims = (system.dims.M_g, system.dims.N_g, system.n_t)
        return somp3d(system.y, system.psi, dims, self.somp_params(problem))
