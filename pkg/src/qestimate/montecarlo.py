"""Classical Monte Carlo estimators: importance sampling with density |g| / ||g||."""

import logging
from typing import Callable, Optional, Union

import numpy as np

from src.core.config import DEFAULT_QUADRATURE, QuadratureConfig
from src.core.data_types import EstimatorBackend
from src.core.exceptions import InputError
from src.core.seeds import SeedLike
from src.qcore.estimator import ConstantEstimator, Estimator
from src.qestimate.base import MeanEstimator, WeightedSumProblem, unit_phase
from src.qestimate.integration import (
    IntegrationProblem,
    choose_refinement,
    discretize,
    evaluate_points,
)

logger = logging.getLogger(__name__)


@MeanEstimator.register_backend(EstimatorBackend.MONTE_CARLO)
class MonteCarloMeanEstimator(MeanEstimator):
    """Average of n values drawn with probability proportional to their weight."""

    def __init__(self, values, n, weights=None, nonnegative=False):
        super().__init__(values, n, weights, nonnegative)
        if self.n < 1:
            raise InputError("Monte Carlo needs at least one sample", details={"n": self.n})
        self.probs = self.weights / self.weights.sum()

    @property
    def n_queries(self) -> int:
        return self.n

    def sample(self, rng: np.random.Generator):
        return self.sample_many(rng, 1)[0]

    def sample_many(self, rng: np.random.Generator, size: int) -> np.ndarray:
        index = rng.choice(self.values.shape[0], size=(size, self.n), p=self.probs)
        return self.values[index].mean(axis=1)


class ImportanceSamplingEstimator(Estimator):
    """scale * mean of n draws of a sampled integrand.

    Args:
        draw: Map (rng, size) -> sampled integrand values
        scale: Normalising constant of the sampling density
        n: Samples per estimate, each charged as one query
    """

    def __init__(
        self,
        draw: Callable[[np.random.Generator, int], np.ndarray],
        scale: float,
        n: int,
    ):
        if n < 1:
            raise InputError("Monte Carlo needs at least one sample", details={"n": n})
        self.draw = draw
        self.scale = scale
        self.n = int(n)

    @property
    def n_queries(self) -> int:
        return self.n

    def sample(self, rng: np.random.Generator):
        return self.scale * np.mean(self.draw(rng, self.n))

    def sample_many(self, rng: np.random.Generator, size: int) -> np.ndarray:
        draws = np.asarray(self.draw(rng, size * self.n)).reshape(size, self.n)
        return self.scale * draws.mean(axis=1)


def weighted_sum_sampler(problem: WeightedSumProblem, n: int) -> Estimator:
    """Importance sampling over indices for S_{N,g} f."""
    norm = problem.l1_norm
    if norm == 0.0:
        return ConstantEstimator(0.0)
    values = unit_phase(problem.g) * problem.values()
    if not np.iscomplexobj(problem.g) and not np.iscomplexobj(values):
        values = values.real
    estimator = MonteCarloMeanEstimator(values, n, weights=np.abs(problem.g))
    return _Scaled(estimator, norm)


class _Scaled(Estimator):
    def __init__(self, inner: Estimator, factor):
        self.inner = inner
        self.factor = factor

    @property
    def n_queries(self) -> int:
        return self.inner.n_queries

    def sample(self, rng):
        return self.factor * self.inner.sample(rng)

    def sample_many(self, rng, size):
        return self.factor * self.inner.sample_many(rng, size)


def integral_sampler(
    problem: IntegrationProblem,
    n: int,
    k_refinement: Optional[int] = None,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
) -> Estimator:
    """Importance sampling for I_{Q,g} f.

    Uses the problem's own sampler of |g| / ||g|| when it has one. Otherwise a
    cell is drawn with probability proportional to |int_cell g| and the point is
    uniform in the cell.
    """
    if problem.sampler is not None:
        if problem.l1_bound is None:
            raise InputError("A density sampler needs the L1 norm of the weight")

        def draw_exact(rng, size):
            points = problem.sampler(rng, size)
            return unit_phase(problem.weight(points)) * evaluate_points(problem.f_oracle, points)

        return ImportanceSamplingEstimator(draw_exact, problem.l1_bound, n)

    k = k_refinement
    if k is None:
        k = choose_refinement(n, problem.lipschitz_bound(), problem.frame, config.max_cells)
    quad = discretize(problem, k, config)
    magnitudes = np.abs(quad.weights)
    total = float(magnitudes.sum())
    if total == 0.0:
        return ConstantEstimator(0.0)
    phases = unit_phase(quad.weights)
    probs = magnitudes / total

    def draw_cells(rng, size):
        cells = rng.choice(quad.N, size=size, p=probs)
        width = quad.upper[cells] - quad.lower[cells]
        points = quad.lower[cells] + rng.random((size, problem.d)) * width
        inside = problem.region.contains(points)
        points[~inside] = problem.region.project(points[~inside])
        return phases[cells] * evaluate_points(problem.f_oracle, points)

    return ImportanceSamplingEstimator(draw_cells, total, n)


def mc_mean(
    problem: Union[WeightedSumProblem, IntegrationProblem],
    n: int,
    seed: SeedLike = None,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
):
    """Classical importance-sampling estimate with n function evaluations."""
    if isinstance(problem, WeightedSumProblem):
        est = weighted_sum_sampler(problem, n)
    else:
        est = integral_sampler(problem, n, config=config)
    return est.estimate(seed)
