"""Base estimator class for all channel estimators.

Wraps estimator-specific logic with error handling so that any failure
surfaces as an EstimatorError carrying the estimator id.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

from otfs_bench.exceptions import EstimatorError
from otfs_bench.types import (ChannelSupport, ComplexArray, EstimateRecord, EstimatorId,
                              ImpulseLayout, OtfsConfig, SensingSystem, UILogger)


class EstimatorKind(Enum):
    """What the estimator reconstructs."""

    DELAY_DOPPLER = "dd"
    DELAY_DOPPLER_ANGLE = "dda"


@dataclass
class EstimatorSpec:
    """Specification for an estimator's metadata."""

    id: EstimatorId
    label: str
    kind: EstimatorKind
    description: str = ""


@dataclass
class EstimationProblem:
    """Everything an estimator may read for one trial."""

    cfg: OtfsConfig
    support: ChannelSupport
    n_t: int
    n_paths: int
    system: Optional[SensingSystem] = None
    received: Optional[ComplexArray] = None
    layout: Optional[ImpulseLayout] = None
    extra: Dict[str, Any] = field(default_factory=dict)


class BaseEstimator(ABC):
    """Base class for all estimators."""

    def __init__(self, spec: EstimatorSpec, params: Optional[Dict[str, Any]] = None):
        self.spec = spec
        self.params = dict(params or {})

    @property
    def id(self) -> EstimatorId:
        return self.spec.id

    @property
    def kind(self) -> EstimatorKind:
        return self.spec.kind

    def estimate(self, problem: EstimationProblem, ui_logger: UILogger | None = None):
        """Run the estimator.

        Returns:
            EstimateRecord with ``meta["estimator"]`` set.

        Raises:
            EstimatorError: For any failure, with the estimator id attached.
        """
        try:
            record = self._estimate(problem)
        except EstimatorError:
            raise
        except Exception as e:
            if ui_logger:
                ui_logger.warning(f"{self.id}: {e}")
            raise EstimatorError(estimator_id=self.id, message=str(e), original_error=e) from e
        record.meta["estimator"] = self.id
        return record

    @abstractmethod
    def _estimate(self, problem: EstimationProblem) -> EstimateRecord:
        """Estimator-specific logic."""
        pass
