import pytest

from src.core.exceptions import (
    BackendError,
    BenchmarkError,
    CapacityError,
    ConfigError,
    ConfigParseError,
    ConfigValidationError,
    ContractViolationError,
    EstimationError,
    ExportError,
    InputError,
    InsufficientBudgetError,
    OracleBoundError,
    PlotError,
    ProblemError,
    QPDEError,
    QueryError,
    RateFitError,
    RegionError,
    UndefinedFunctionalError,
    UnregisteredProblemError,
    UnsupportedBackendError,
    ZeroReductionError,
)


def test_base_exception_initialization():
    exc = QPDEError("Test error", {"foo": "bar"})
    assert exc.details == {"foo": "bar"}
    assert str(exc) == "Test error"


def test_base_exception_details_default():
    exc = QPDEError("Test error")
    assert exc.details == {}


@pytest.mark.parametrize(
    "exception_class",
    [
        ConfigError,
        ConfigParseError,
        ConfigValidationError,
        QueryError,
        ContractViolationError,
        UndefinedFunctionalError,
        OracleBoundError,
        BackendError,
        CapacityError,
        UnsupportedBackendError,
        InputError,
        RegionError,
        InsufficientBudgetError,
        EstimationError,
        ZeroReductionError,
        ProblemError,
        UnregisteredProblemError,
        BenchmarkError,
        RateFitError,
        ExportError,
        PlotError,
    ],
)
def test_subclass_is_instance_of_base(exception_class):
    exc = exception_class("Test", details={"key": 1})
    assert isinstance(exc, QPDEError)
    assert exc.details == {"key": 1}


@pytest.mark.parametrize(
    "subclass, parent",
    [
        (ConfigParseError, ConfigError),
        (ConfigValidationError, ConfigError),
        (ContractViolationError, QueryError),
        (UndefinedFunctionalError, QueryError),
        (OracleBoundError, QueryError),
        (CapacityError, BackendError),
        (UnsupportedBackendError, BackendError),
        (RegionError, InputError),
        (InsufficientBudgetError, InputError),
        (ZeroReductionError, EstimationError),
        (UnregisteredProblemError, ProblemError),
        (RateFitError, BenchmarkError),
        (ExportError, BenchmarkError),
        (PlotError, BenchmarkError),
    ],
)
def test_subclass_correct_parent(subclass, parent):
    assert issubclass(subclass, parent)


def test_config_errors_are_not_runtime_errors():
    assert not issubclass(ConfigError, BenchmarkError)
    assert not issubclass(InputError, ConfigError)
