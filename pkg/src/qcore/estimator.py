"""The estimator contract shared by every leaf and composite estimator.

An estimator knows its query consumption and draws outputs from a generator.
Anything with a deterministic set-up (quadrature weights, reductions) does it in
its constructor so that repeated sampling only pays for the stochastic part.
"""

import logging
from abc import ABC, abstractmethod
from typing import Any, Sequence, Union

import numpy as np

from src.core.config import DEFAULT_SIMULATOR, SimulatorConfig
from src.core.data_types import Backend, OutputDistribution
from src.core.exceptions import UnsupportedBackendError
from src.core.seeds import SeedLike, make_rng
from src.qcore.algorithm import AlgorithmSpec, algorithm_distribution, run_algorithm
from src.qcore.query import Oracle

logger = logging.getLogger(__name__)


class Estimator(ABC):
    """Randomized algorithm with a known query count."""

    @property
    @abstractmethod
    def n_queries(self) -> int:
        """Queries consumed by one output."""

    @abstractmethod
    def sample(self, rng: np.random.Generator) -> Any:
        """Draw one output."""

    def sample_many(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw size independent outputs, stacked along the first axis."""
        return np.array([self.sample(rng) for _ in range(size)])

    def estimate(self, seed: SeedLike = None) -> Any:
        """Draw one output from a fresh generator."""
        return self.sample(make_rng(seed))

    def distribution(self) -> OutputDistribution:
        """Exact output law, when the estimator has a finite one."""
        raise UnsupportedBackendError(
            f"{type(self).__name__} has no closed-form output distribution"
        )


class ConstantEstimator(Estimator):
    """Deterministic output, e.g. an exact sum or an identically zero part."""

    def __init__(self, value: Any, n_queries: int = 0):
        self.value = value
        self._n_queries = int(n_queries)

    @property
    def n_queries(self) -> int:
        return self._n_queries

    def sample(self, rng: np.random.Generator) -> Any:
        return self.value

    def sample_many(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.array([self.value] * size)

    def distribution(self) -> OutputDistribution:
        if np.ndim(self.value) != 0:
            return super().distribution()
        return OutputDistribution(support=np.array([self.value]), probs=np.array([1.0]))


class DistributionEstimator(Estimator):
    """Estimator that samples a known finite output law."""

    def __init__(self, dist: OutputDistribution, n_queries: int):
        self.dist = dist
        self._n_queries = int(n_queries)

    @property
    def n_queries(self) -> int:
        return self._n_queries

    def sample(self, rng: np.random.Generator) -> Any:
        return self.dist.sample(rng)

    def sample_many(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return self.dist.sample(rng, size=size)

    def distribution(self) -> OutputDistribution:
        return self.dist


class FiniteEstimator(DistributionEstimator):
    """Estimator given directly by its support and probabilities.

    Examples:
        >>> coin = FiniteEstimator([0.0, 1.0], [0.75, 0.25])
        >>> coin.distribution().mean()
        0.25
    """

    def __init__(
        self,
        support: Sequence[Union[float, complex]],
        probs: Sequence[float],
        n_queries: int = 0,
    ):
        super().__init__(
            OutputDistribution(support=np.asarray(support), probs=np.asarray(probs, dtype=float)),
            n_queries,
        )


class AlgorithmEstimator(Estimator):
    """A quantum algorithm run on a fixed oracle."""

    def __init__(
        self,
        alg: AlgorithmSpec,
        f: Oracle,
        backend: Union[Backend, str] = Backend.ANALYTIC,
        config: SimulatorConfig = DEFAULT_SIMULATOR,
    ):
        self.alg = alg
        self.f = f
        self.backend = Backend(backend)
        self.config = config
        self._dist = None

    @property
    def n_queries(self) -> int:
        return self.alg.n_queries

    def sample(self, rng: np.random.Generator) -> Any:
        if self.backend is Backend.STATEVECTOR:
            return run_algorithm(self.alg, self.f, self.backend, rng, self.config)
        return self.distribution().sample(rng)

    def distribution(self) -> OutputDistribution:
        if self._dist is None:
            self._dist = algorithm_distribution(self.alg, self.f, self.backend, self.config)
        return self._dist

