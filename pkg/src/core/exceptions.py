"""This module provides all exceptions used within the system. All exceptions inherit from
the base class QPDEError or one of the subsequent children classes.
"""

from typing import Any, Dict, Optional


class QPDEError(Exception):
    """Base exception for all qpde-bench errors."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.details = details or {}


class ConfigError(QPDEError):
    """Base class for configuration errors."""


class ConfigParseError(ConfigError):
    """Raised when a key=value config file cannot be parsed."""


class ConfigValidationError(ConfigError):
    """Raised when config values are missing, unknown or out of range."""


class QueryError(QPDEError):
    """Base class for query model errors."""


class ContractViolationError(QueryError):
    """Raised when a state or operator breaks a precondition (dimension, norm)."""


class UndefinedFunctionalError(QueryError):
    """Raised when tau references an information functional the oracle lacks."""


class OracleBoundError(QueryError):
    """Raised when an oracle value leaves the admissible range, e.g. |f(i)| > 1."""


class BackendError(QPDEError):
    """Base class for execution backend errors."""


class CapacityError(BackendError):
    """Raised when the state vector would exceed the configured qubit cap."""


class UnsupportedBackendError(BackendError):
    """Raised when an algorithm has no law or implementation for a backend."""


class InputError(QPDEError):
    """Base class for invalid problem inputs."""


class RegionError(InputError):
    """Raised for regions of zero measure or malformed region descriptors."""


class InsufficientBudgetError(InputError):
    """Raised when a query or sample budget is too small for the method."""


class EstimationError(QPDEError):
    """Base class for estimation errors."""


class ZeroReductionError(EstimationError):
    """Raised when the weight reduction leaves no replicated index (M = 0)."""


class ProblemError(QPDEError):
    """Base class for problem registry errors."""


class UnregisteredProblemError(ProblemError):
    """Raised when a problem, family or benchmark id is not registered."""


class BenchmarkError(QPDEError):
    """Base class for benchmark harness errors."""


class RateFitError(BenchmarkError):
    """Raised when a rate fit has too few usable records."""


class ExportError(BenchmarkError):
    """Raised when records, plans or distributions cannot be written or read."""


class PlotError(BenchmarkError):
    """Raised when a plot cannot be produced from the given series."""
