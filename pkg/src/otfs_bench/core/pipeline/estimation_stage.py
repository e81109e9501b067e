"""Module: otfs_bench.core.pipeline.estimation_stage

Runs every configured estimator and scores it against the true channel.
"""

import time
from typing import Optional

from otfs_bench.core.channel import embed_truncated, invec
from otfs_bench.core.estimators.base import EstimationProblem, EstimatorKind
from otfs_bench.core.estimators.metrics import nmse_dda, nmse_per_antenna
from otfs_bench.core.estimators.registry import EstimatorRegistry, default_registry
from otfs_bench.core.pipeline.base import BaseStage
from otfs_bench.core.state import TrialState
from otfs_bench.types import UILogger


class EstimationStage(BaseStage):
    """Estimate, then NMSE over the full tensor (sparse) or per antenna (impulse)."""

    def __init__(
        self,
        registry: Optional[EstimatorRegistry] = None,
        ui_logger: Optional[UILogger] = None,
    ):
        self.registry = registry or default_registry
        self.ui = ui_logger

    @property
    def name(self) -> str:
        return "Estimation"

    def should_run(self, state: TrialState) -> bool:
        return bool(state.experiment.estimators)

    def execute(self, state: TrialState) -> None:
        cfg = state.otfs
        problem = EstimationProblem(
            cfg=cfg,
            support=state.support,
            n_t=state.n_t,
            n_paths=state.experiment.channel.N_p,
            system=state.system,
            received=state.impulse_received,
            layout=state.layout,
        )
        for config in state.experiment.estimators:
            estimator = self.registry.create(config)
            started = time.perf_counter()
            record = estimator.estimate(problem, self.ui)
            state.runtime_ms[estimator.id] = (time.perf_counter() - started) * 1e3
            if estimator.kind is EstimatorKind.DELAY_DOPPLER_ANGLE:
                dims = state.system.dims
                truncated = invec(record.h_hat, dims.M_g, dims.N_g, state.n_t)
                full = embed_truncated(truncated, cfg.M, cfg.N)
                record.nmse = nmse_dda(full, state.dda.tensor)
            else:
                record.nmse = nmse_per_antenna(record.h_hat, state.dds)
            state.records[estimator.id] = record

    def validate(self, state: TrialState) -> bool:
        return len(state.records) == len(state.experiment.estimators)
