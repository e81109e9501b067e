"""
OTFS Bench exception hierarchy.

All exceptions inherit from OtfsBenchError so callers can catch any bench-specific error.
"""

from otfs_bench.types import ErrorMessage, FilePath, OriginalError


class OtfsBenchError(Exception):
    """Base exception for all bench errors."""

    pass


# Configuration and input exceptions
class ConfigurationError(OtfsBenchError):
    """Raised when a configuration or layout is invalid."""

    pass


class DimensionError(OtfsBenchError):
    """Raised when array shapes do not match."""

    pass


class ArgumentError(OtfsBenchError):
    """Raised when a scalar argument is out of range."""

    pass


# Estimation exceptions
class EstimationError(OtfsBenchError):
    """Raised when an estimate or metric is undefined."""

    pass


class EstimatorError(OtfsBenchError):
    """Raised when an estimator fails to run."""

    def __init__(
        self, estimator_id: str, message: ErrorMessage, original_error: OriginalError = None
    ):
        self.estimator_id = estimator_id
        self.original_error = original_error
        super().__init__(f"Estimator '{estimator_id}' failed: {message}")


# Service exceptions
class ServiceError(OtfsBenchError):
    """Base exception for output and telemetry services."""

    pass


class ResultsError(ServiceError):
    """Raised when writing the results store fails."""

    def __init__(
        self,
        operation: str,
        path: FilePath,
        message: ErrorMessage,
        original_error: OriginalError = None,
    ):
        self.operation = operation
        self.path = path
        self.original_error = original_error
        super().__init__(f"Results {operation} failed for '{path}': {message}")


class TelemetryError(ServiceError):
    """Raised when telemetry operations fail."""

    pass
