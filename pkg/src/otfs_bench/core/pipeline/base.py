"""Module: otfs_bench.core.pipeline.base

Base stage abstraction for one Monte-Carlo trial.
Defines the contract that all trial stages must implement.
"""

from abc import ABC, abstractmethod

from otfs_bench.core.state import TrialState


class BaseStage(ABC):
    """Base class for all trial stages."""

    @property
    @abstractmethod
    def name(self) -> str:
        """Return the name of this stage."""
        pass

    @abstractmethod
    def should_run(self, state: TrialState) -> bool:
        """Determine if this stage applies to the trial."""
        pass

    @abstractmethod
    def execute(self, state: TrialState) -> None:
        """Execute the stage, filling its part of the state."""
        pass

    @abstractmethod
    def validate(self, state: TrialState) -> bool:
        """Validate that the stage produced its outputs."""
        pass
