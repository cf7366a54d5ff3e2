"""Mean estimation problems and the backend registry of mean estimators.

A mean estimator approximates the mean of a bounded sequence given by its
distinct values and their (integer or real) multiplicities:

    mean = sum_i w_i v_i / sum_i w_i

Every backend implements the same constructor and is registered against an
EstimatorBackend, so callers select leaves by enum value only.
"""

import logging
from abc import ABC
from dataclasses import dataclass
from typing import Any, Callable, Dict, Mapping, Optional, Sequence, Type, Union

import numpy as np

from src.core.data_types import EstimatorBackend
from src.core.exceptions import (
    ContractViolationError,
    InputError,
    UndefinedFunctionalError,
    UnsupportedBackendError,
)
from src.qcore.estimator import Estimator

logger = logging.getLogger(__name__)

BOUND_SLACK = 1e-12

SequenceOracle = Union[np.ndarray, Sequence[complex], Mapping[int, Any], Callable[[int], Any]]


def evaluate_sequence(f: SequenceOracle, size: int) -> np.ndarray:
    """Evaluate a sequence oracle on 0..size-1 and check |f(i)| <= 1.

    Raises:
        ContractViolationError: If a value exceeds 1 in modulus
        UndefinedFunctionalError: If the oracle has no value for an index
    """
    if isinstance(f, np.ndarray) or isinstance(f, (list, tuple)):
        values = np.asarray(f)
        if values.shape[0] < size:
            raise UndefinedFunctionalError(
                "Sequence oracle shorter than the problem", details={"size": size}
            )
        values = values[:size]
    else:
        try:
            lookup = f.__getitem__ if isinstance(f, Mapping) else f
            values = np.array([lookup(i) for i in range(size)])
        except (KeyError, IndexError) as e:
            raise UndefinedFunctionalError(f"Sequence oracle failed: {str(e)}") from e
    if values.dtype.kind not in "iufc":
        values = values.astype(complex if np.iscomplexobj(values) else float)
    check_bounded(values)
    return values


def check_bounded(values: np.ndarray, bound: float = 1.0) -> None:
    """Raise when some |value| exceeds bound."""
    if values.size and float(np.max(np.abs(values))) > bound + BOUND_SLACK:
        raise ContractViolationError(
            f"Oracle value exceeds the bound {bound}",
            details={"max_abs": float(np.max(np.abs(values)))},
        )


def unit_phase(values) -> np.ndarray:
    """values / |values| elementwise, 0 where a value vanishes."""
    values = np.asarray(values)
    magnitude = np.abs(values)
    return np.where(magnitude > 0, values / np.where(magnitude > 0, magnitude, 1.0), 0.0)


@dataclass
class WeightedSumProblem:
    """The weighted mean S_{N,g} f = (1/N) sum_i g(i) f(i).

    Args:
        N: Sequence length
        g: Weight vector, complex allowed
        f_oracle: Values or map on 0..N-1 with |f(i)| <= 1
    """

    N: int
    g: np.ndarray
    f_oracle: SequenceOracle

    def __post_init__(self):
        self.g = np.asarray(self.g)
        if self.N < 1:
            raise InputError("Weighted sum needs N >= 1", details={"N": self.N})
        if self.g.shape != (self.N,):
            raise InputError(
                "Weight vector must have length N",
                details={"N": self.N, "shape": self.g.shape},
            )
        if not np.all(np.isfinite(self.g)):
            raise InputError("Weights must be finite")

    @property
    def l1_norm(self) -> float:
        """||g||_{L1^N} = (1/N) sum |g(i)|."""
        return float(np.abs(self.g).sum() / self.N)

    def values(self) -> np.ndarray:
        return evaluate_sequence(self.f_oracle, self.N)

    def exact(self) -> complex:
        """S_{N,g} f computed directly."""
        return (self.g * self.values()).sum() / self.N


class MeanEstimator(Estimator, ABC):
    """Estimator of a weighted sequence mean behind a pluggable backend.

    Args:
        values: Distinct sequence values, |v| <= 1
        n: Query budget
        weights: Multiplicity of each value, uniform when None
        nonnegative: Values are known to lie in [0, 1]
    """

    _backends: Dict[EstimatorBackend, Type["MeanEstimator"]] = {}

    def __init__(
        self,
        values: np.ndarray,
        n: int,
        weights: Optional[np.ndarray] = None,
        nonnegative: bool = False,
    ):
        self.values = np.asarray(values)
        check_bounded(self.values)
        self.weights = (
            np.ones(self.values.shape[0]) if weights is None else np.asarray(weights, dtype=float)
        )
        if self.weights.shape != self.values.shape[:1]:
            raise InputError("Weights and values differ in length")
        if np.any(self.weights < 0):
            raise InputError("Multiplicities must be nonnegative")
        if self.weights.sum() <= 0:
            raise InputError("Mean of an empty sequence")
        if nonnegative and (np.iscomplexobj(self.values) or np.any(self.values < -BOUND_SLACK)):
            raise ContractViolationError("Values declared nonnegative are not")
        self.n = int(n)
        self.nonnegative = nonnegative

    @classmethod
    def register_backend(cls, backend: EstimatorBackend):
        """Register a MeanEstimator subclass for a backend.

        Args:
            backend: Enum value the subclass answers to
        """

        def wrapper(estimator_cls: Type["MeanEstimator"]) -> Type["MeanEstimator"]:
            cls._backends[backend] = estimator_cls
            return estimator_cls

        return wrapper

    @classmethod
    def for_backend(cls, backend: Union[EstimatorBackend, str]) -> Type["MeanEstimator"]:
        """Look up the estimator class of a backend."""
        backend = EstimatorBackend(backend)
        if backend not in cls._backends:
            raise UnsupportedBackendError(
                f"No mean estimator registered for {backend.value}",
                details={"backend": backend.value},
            )
        return cls._backends[backend]

    @classmethod
    def registered_backends(cls):
        return sorted(backend.value for backend in cls._backends)

    @property
    def size(self) -> float:
        """Length M of the replicated sequence."""
        return float(self.weights.sum())

    def exact_mean(self):
        return (self.weights * self.values).sum() / self.weights.sum()


def make_mean_estimator(
    backend: Union[EstimatorBackend, str],
    /,
    values: np.ndarray,
    n: int,
    weights: Optional[np.ndarray] = None,
    nonnegative: bool = False,
    **options,
) -> MeanEstimator:
    """Instantiate the registered estimator of a backend."""
    estimator_cls = MeanEstimator.for_backend(backend)
    return estimator_cls(values, n, weights=weights, nonnegative=nonnegative, **options)
