"""Deterministic and exact mean estimators."""

import logging

import numpy as np

from src.core.data_types import EstimatorBackend, OutputDistribution
from src.qestimate.base import MeanEstimator

logger = logging.getLogger(__name__)


class _PointMassEstimator(MeanEstimator):
    """Mean estimator whose output does not depend on the generator."""

    value = 0.0
    charged = 0

    @property
    def n_queries(self) -> int:
        return self.charged

    def sample(self, rng: np.random.Generator):
        return self.value

    def sample_many(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.full(size, self.value)

    def distribution(self) -> OutputDistribution:
        return OutputDistribution(support=np.array([self.value]), probs=np.array([1.0]))


@MeanEstimator.register_backend(EstimatorBackend.EXACT)
class ExactMeanEstimator(_PointMassEstimator):
    """Exact mean at no charge. Testing and reference runs only."""

    def __init__(self, values, n, weights=None, nonnegative=False):
        super().__init__(values, n, weights, nonnegative)
        self.value = self.exact_mean()
        self.charged = 0


@MeanEstimator.register_backend(EstimatorBackend.DETERMINISTIC)
class DeterministicMeanEstimator(_PointMassEstimator):
    """Budget-limited deterministic mean.

    With a budget covering every distinct value the mean is exact and each value
    is charged once. Otherwise the replicated sequence is cut into n equal strata
    and the value at each stratum midpoint is averaged.
    """

    def __init__(self, values, n, weights=None, nonnegative=False):
        super().__init__(values, n, weights, nonnegative)
        distinct = self.values.shape[0]
        if self.n >= distinct:
            self.value = self.exact_mean()
            self.charged = distinct
            return
        budget = max(self.n, 1)
        cumulative = np.cumsum(self.weights)
        positions = (np.arange(budget) + 0.5) * cumulative[-1] / budget
        index = np.minimum(np.searchsorted(cumulative, positions, side="right"), distinct - 1)
        self.value = self.values[index].mean()
        self.charged = budget
        logger.debug("Deterministic mean from %s of %s values", budget, distinct)
