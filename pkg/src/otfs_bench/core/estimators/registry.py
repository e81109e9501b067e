"""Estimator registry: look estimators up by the id used in experiment configs."""

from typing import Dict, List, Type

from otfs_bench.constants import ERROR_UNKNOWN_ESTIMATOR
from otfs_bench.core.estimators.base import BaseEstimator
from otfs_bench.core.estimators.impulse import ImpulseEstimator
from otfs_bench.core.estimators.omp import OmpEstimator
from otfs_bench.core.estimators.somp import Somp3dEstimator
from otfs_bench.exceptions import ConfigurationError
from otfs_bench.types import EstimatorConfig, EstimatorId


class EstimatorRegistry:
    """Registry of estimator classes keyed by id."""

    def __init__(self):
        self._classes: Dict[EstimatorId, Type[BaseEstimator]] = {}
        self._discovered = False

    def register(self, estimator_class: Type[BaseEstimator]) -> None:
        self._classes[estimator_class().id] = estimator_class

    def discover(self) -> None:
        if self._discovered:
            return
        for estimator_class in (ImpulseEstimator, OmpEstimator, Somp3dEstimator):
            self.register(estimator_class)
        self._discovered = True

    def ids(self) -> List[EstimatorId]:
        self.discover()
        return list(self._classes)

    def create(self, config: EstimatorConfig) -> BaseEstimator:
        """Instantiate the estimator named by ``config.id`` with its params."""
        self.discover()
        if config.id not in self._classes:
            raise ConfigurationError(ERROR_UNKNOWN_ESTIMATOR.format(estimator_id=config.id))
        return self._classes[config.id](config.params)


default_registry = EstimatorRegistry()
