"""Combinators on estimators: median boosting and linear composition.

Query counts of a composite are the exact integer sums of its parts.
"""

import itertools
import logging
from typing import Any, Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import stats

from src.core.data_types import OutputDistribution
from src.core.exceptions import InputError, UnsupportedBackendError
from src.qcore.estimator import Estimator

logger = logging.getLogger(__name__)

SubEstimator = Union[Estimator, Tuple[Estimator, Any]]


def lower_median(samples: np.ndarray) -> Any:
    """Lower median along the first axis, componentwise for arrays and complex values."""
    samples = np.asarray(samples)
    rank = (samples.shape[0] - 1) // 2
    if np.iscomplexobj(samples):
        real = np.sort(samples.real, axis=0)[rank]
        imag = np.sort(samples.imag, axis=0)[rank]
        return real + 1j * imag
    return np.sort(samples, axis=0)[rank]


def median_failure_probability(p: float, nu: int) -> float:
    """Exact failure probability of the lower median of nu runs.

    Each run fails independently with probability p. The lower median can only
    leave the success interval when at least ceil(nu / 2) runs do.
    """
    if nu < 1:
        raise InputError("Repetition count must be positive", details={"nu": nu})
    needed = (nu + 1) // 2
    return float(stats.binom.sf(needed - 1, nu, p))


class BoostedEstimator(Estimator):
    """Median of nu independent runs of an estimator."""

    def __init__(self, est: Estimator, nu: int):
        if nu < 1:
            raise InputError("Repetition count must be positive", details={"nu": nu})
        self.est = est
        self.nu = int(nu)

    @property
    def n_queries(self) -> int:
        return self.nu * self.est.n_queries

    def sample(self, rng: np.random.Generator) -> Any:
        return lower_median(self.est.sample_many(rng, self.nu))

    def distribution(self) -> OutputDistribution:
        """Law of the lower median, from the order-statistic formula.

        P(median <= v) = P(at least k of nu runs are <= v) with k = (nu - 1) // 2 + 1.
        """
        base = self.est.distribution().merged()
        if np.iscomplexobj(base.support):
            raise UnsupportedBackendError("Median law is only available for real outputs")
        cdf = np.clip(np.cumsum(base.probs), 0.0, 1.0)
        k = (self.nu - 1) // 2 + 1
        median_cdf = stats.binom.sf(k - 1, self.nu, cdf)
        median_cdf[-1] = 1.0
        probs = np.diff(np.concatenate([[0.0], median_cdf]))
        return OutputDistribution(support=base.support, probs=np.clip(probs, 0.0, None))


def boost_median(est: Estimator, nu: int) -> Estimator:
    """Repeat est nu times and output the lower median.

    The query budget multiplies by nu; at a fixed error level where est succeeds
    with probability at least 3/4, the boosted failure is at most e^(-nu/8).
    """
    return BoostedEstimator(est, nu)


class LinearComposite(Estimator):
    """Sub-estimators run with independent generators and combined linearly."""

    def __init__(
        self,
        subs: Sequence[SubEstimator],
        post: Optional[Callable[[Tuple[Any, ...]], Any]] = None,
    ):
        if not subs:
            raise InputError("A composite needs at least one sub-estimator")
        self.parts: List[Tuple[Estimator, Any]] = [
            sub if isinstance(sub, tuple) else (sub, 1.0) for sub in subs
        ]
        self.post = post

    @property
    def n_queries(self) -> int:
        return sum(est.n_queries for est, _ in self.parts)

    @staticmethod
    def _scaled(coefficient: Any, value: Any) -> Any:
        if np.ndim(coefficient) == 2:
            return np.asarray(coefficient) @ np.asarray(value)
        return coefficient * value

    def combine(self, values: Sequence[Any]) -> Any:
        scaled = tuple(
            self._scaled(coefficient, value)
            for (_, coefficient), value in zip(self.parts, values)
        )
        if self.post is None:
            return sum(scaled[1:], scaled[0])
        return self.post(scaled)

    def sample(self, rng: np.random.Generator) -> Any:
        children = rng.spawn(len(self.parts))
        return self.combine([est.sample(child) for (est, _), child in zip(self.parts, children)])

    def distribution(self) -> OutputDistribution:
        """Pushforward of the product of the sub-estimators' finite laws."""
        laws = [est.distribution().merged() for est, _ in self.parts]
        size = int(np.prod([len(law) for law in laws]))
        if size > 2**20:
            raise UnsupportedBackendError(
                "Product law too large to enumerate", details={"outcomes": size}
            )
        support, probs = [], []
        for combo in itertools.product(*(range(len(law)) for law in laws)):
            support.append(self.combine([law.support[i] for law, i in zip(laws, combo)]))
            probs.append(np.prod([law.probs[i] for law, i in zip(laws, combo)]))
        probs = np.asarray(probs)
        return OutputDistribution(support=np.asarray(support), probs=probs / probs.sum()).merged()


def compose_linear(
    subs: Sequence[SubEstimator],
    post: Optional[Callable[[Tuple[Any, ...]], Any]] = None,
) -> Estimator:
    """Compose independent sub-estimators.

    Args:
        subs: Estimators, or (estimator, coefficient) pairs where the coefficient is a
            scalar or a matrix applied to the sub-estimator's output
        post: Map applied to the tuple of scaled outputs, the sum by default

    Examples:
        >>> from src.qcore.estimator import ConstantEstimator
        >>> composite = compose_linear([ConstantEstimator(2.0, 3), ConstantEstimator(3.0, 4)])
        >>> composite.estimate(seed=0), composite.n_queries
        (5.0, 7)
    """
    return LinearComposite(subs, post)
