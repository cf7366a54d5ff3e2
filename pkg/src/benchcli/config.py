"""Experiment configuration from flat key = value files.

Example file:

    problem = poisson-disk
    setting = q
    r = 1
    manifold = circle
    rhs = bubble
    budgets = 2^6, 2^7, 2^8, 2^9
    trials = 50
    seed = 7
    out = results/disk_q.csv
"""

import logging
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Dict, Mapping, Optional, Tuple, Union

from src.core.config import (
    load_key_value_file,
    parse_bool,
    parse_float,
    parse_int,
    parse_int_list,
)
from src.core.data_types import Backend, EstimatorBackend, Setting
from src.core.exceptions import ConfigValidationError, InputError

logger = logging.getLogger(__name__)

MIN_QUANTILE_TRIALS = 50


@dataclass(frozen=True)
class ExperimentConfig:
    """A validated experiment.

    Args:
        problem: Benchmark problem id
        setting: Comparison setting
        backend: Leaf estimator override, the setting's leaf by default
        simulator: Execution backend of the quantum leaves
        r, d, d1, s, sigma: Input smoothness, dimensions and kernel class
        budgets: Strictly increasing budget ladder
        trials: Trials per budget
        seed: Master seed
        out: Record CSV path
        theta: Failure probability of the error quantile
        tolerance: Allowed gap between fitted and predicted slope
        record_wall_time: Store wall times instead of 0
        manifold: Manifold of the PDE problems (point, circle, domain)
        rhs: Right-hand side family of the PDE problems
        size: Problem size, N for the mean and the radius of the circle
        workers: Threads running the trials of one budget
    """

    problem: str = "mean"
    setting: Setting = Setting.QUANTUM
    backend: Optional[EstimatorBackend] = None
    simulator: Backend = Backend.ANALYTIC
    r: int = 1
    d: int = 2
    d1: int = 1
    s: int = 2
    sigma: float = -1.0
    budgets: Tuple[int, ...] = (16, 32, 64, 128)
    trials: int = MIN_QUANTILE_TRIALS
    seed: int = 0
    out: Path = field(default_factory=lambda: Path("results/records.csv"))
    theta: float = 0.25
    tolerance: float = 0.25
    record_wall_time: bool = False
    manifold: str = "circle"
    rhs: str = "bubble"
    size: Optional[float] = None
    workers: int = 1

    def __post_init__(self):
        budgets = tuple(self.budgets)
        object.__setattr__(self, "budgets", budgets)
        object.__setattr__(self, "out", Path(self.out))
        if not budgets:
            raise ConfigValidationError("budgets must list at least one value")
        if any(b < 1 for b in budgets) or any(a >= b for a, b in zip(budgets, budgets[1:])):
            raise ConfigValidationError(
                "budgets must be positive and strictly increasing", details={"budgets": list(budgets)}
            )
        if self.trials < 1:
            raise ConfigValidationError("trials must be at least 1", details={"trials": self.trials})
        if not 0.0 <= self.theta < 1.0:
            raise ConfigValidationError("theta must lie in [0, 1)", details={"theta": self.theta})
        if self.tolerance <= 0:
            raise ConfigValidationError("tolerance must be positive")
        if self.workers < 1:
            raise ConfigValidationError("workers must be at least 1")
        if not 0 <= self.d1 <= self.d or self.r < 0 or self.s < 1:
            raise ConfigValidationError(
                "Need 0 <= d1 <= d, r >= 0 and s >= 1",
                details={"d": self.d, "d1": self.d1, "r": self.r, "s": self.s},
            )
        if self.trials < MIN_QUANTILE_TRIALS and self.leaf_backend in (
            EstimatorBackend.QUANTUM,
            EstimatorBackend.MONTE_CARLO,
        ):
            logger.warning(
                "Only %s trials per budget; quantiles of randomized runs want at least %s",
                self.trials,
                MIN_QUANTILE_TRIALS,
            )

    @property
    def leaf_backend(self) -> EstimatorBackend:
        return self.setting.leaf_backend if self.backend is None else self.backend

    @classmethod
    def from_mapping(cls, values: Mapping[str, str]) -> "ExperimentConfig":
        """Convert and validate string values.

        Raises:
            ConfigValidationError: On unknown keys or malformed values
        """
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigValidationError(
                f"Unknown config keys: {', '.join(unknown)}", details={"unknown": unknown}
            )
        converters = {
            "problem": lambda key, value: value,
            "setting": _parse_setting,
            "backend": lambda key, value: _parse_enum(key, value, EstimatorBackend),
            "simulator": lambda key, value: _parse_enum(key, value, Backend),
            "r": parse_int,
            "d": parse_int,
            "d1": parse_int,
            "s": parse_int,
            "sigma": parse_float,
            "budgets": lambda key, value: tuple(parse_int_list(key, value)),
            "trials": parse_int,
            "seed": parse_int,
            "out": lambda key, value: Path(value),
            "theta": parse_float,
            "tolerance": parse_float,
            "record_wall_time": parse_bool,
            "manifold": lambda key, value: value,
            "rhs": lambda key, value: value,
            "size": parse_float,
            "workers": parse_int,
        }
        kwargs = {key: converters[key](key, value) for key, value in values.items()}
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "ExperimentConfig":
        return cls.from_mapping(load_key_value_file(path))

    def with_overrides(self, **overrides) -> "ExperimentConfig":
        """Apply CLI overrides; None values are ignored."""
        given: Dict[str, object] = {key: value for key, value in overrides.items() if value is not None}
        if "backend" in given and isinstance(given["backend"], str):
            given["backend"] = _parse_enum("backend", given["backend"], EstimatorBackend)
        return replace(self, **given)


def _parse_setting(key: str, value: str) -> Setting:
    try:
        return Setting.from_label(value.strip())
    except InputError as e:
        raise ConfigValidationError(f"{key}: {str(e)}") from e


def _parse_enum(key: str, value: str, enum_cls):
    try:
        return enum_cls(value.strip())
    except ValueError as e:
        choices = ", ".join(member.value for member in enum_cls)
        raise ConfigValidationError(f"{key} must be one of {choices}, got '{value}'") from e
