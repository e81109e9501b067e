"""Module: otfs_bench.core.pipeline.coordinator

Runs the registered trial stages in order.
"""

from typing import List, Optional

from otfs_bench.core.pipeline.base import BaseStage
from otfs_bench.core.state import TrialState
from otfs_bench.exceptions import OtfsBenchError
from otfs_bench.types import UILogger


class TrialCoordinator:
    """Coordinator for running all trial stages in order."""

    def __init__(self, ui_logger: Optional[UILogger] = None):
        self.ui = ui_logger
        self.stages: List[BaseStage] = []

    def register_stage(self, stage: BaseStage) -> None:
        self.stages.append(stage)

    def run(self, state: TrialState) -> TrialState:
        for stage in self.stages:
            if not stage.should_run(state):
                continue
            stage.execute(state)
            if not stage.validate(state):
                raise OtfsBenchError(f"Trial stage '{stage.name}' failed validation")
            if self.ui:
                self.ui.muted(f"{stage.name} done (seed {state.seed})", spaces=4)
        return state
