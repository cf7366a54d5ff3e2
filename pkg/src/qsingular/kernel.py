"""Weakly singular kernels k(x, y) with x in Q1 = [0,1]^d1 and y in Q2 subset R^d.

A kernel of class C^{s,sigma} is s times differentiable in x off the diagonal
and its derivatives blow up no faster than |x-y|^(sigma-|a|) (a logarithm
replaces the zero power). Q1 is carried into R^d by an embedding, R^d1 x {0}
unless a chart is given, and every distance is measured after embedding.
"""

import logging
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from src.core.exceptions import InputError
from src.core.seeds import SeedLike, make_rng
from src.qestimate.regions import Box, Region

logger = logging.getLogger(__name__)

PairFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]
Chart = Callable[[np.ndarray], np.ndarray]

SIGMA_TOLERANCE = 1e-12


def flat_embedding(d: int) -> Chart:
    """The embedding of R^d1 as R^d1 x {0} in R^d."""

    def embed(x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return np.hstack([x, np.zeros((x.shape[0], d - x.shape[1]))])

    return embed


def distances(points: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.sqrt(((points - y) ** 2).sum(axis=-1))


@dataclass(frozen=True)
class Kernel:
    """A kernel of class C^{s,sigma}(Q1, Q2).

    Args:
        func: Vectorized k on embedded pairs, (X (P, d), y (P, d)) -> (P,)
        s: Smoothness order in x
        sigma: Singularity exponent, sigma > -d
        d: Dimension of Q2
        d1: Dimension of Q1
        norm_bound: Constant of the class bound
        embed: Chart of Q1 into R^d, R^d1 x {0} by default
        embed_lipschitz: Lipschitz constant of the chart
        domain: The set Q2, the unit cube by default
        singular: False for kernels that are smooth on the diagonal
        name: Label used in logs and plan dumps
    """

    func: PairFunction
    s: int
    sigma: float
    d: int
    d1: int
    norm_bound: float = 1.0
    embed: Optional[Chart] = None
    embed_lipschitz: float = 1.0
    domain: Optional[Region] = None
    singular: bool = True
    name: str = "kernel"

    def __post_init__(self):
        if not 0 <= self.d1 <= self.d:
            raise InputError("Kernel needs 0 <= d1 <= d", details={"d": self.d, "d1": self.d1})
        if self.sigma <= -self.d:
            raise InputError(
                "Kernel is not integrable: sigma <= -d", details={"sigma": self.sigma, "d": self.d}
            )
        if self.s < 1:
            raise InputError("Smoothness order must be at least 1", details={"s": self.s})
        if self.embed is None:
            object.__setattr__(self, "embed", flat_embedding(self.d))
        if self.domain is None:
            object.__setattr__(self, "domain", Box.unit(self.d))
        if self.domain.dim != self.d:
            raise InputError(
                "Kernel domain has the wrong dimension",
                details={"domain": self.domain.dim, "d": self.d},
            )

    @property
    def degree(self) -> int:
        """Coordinate degree of the interpolation in x."""
        return max(self.s - 1, 1)

    @property
    def is_logarithmic(self) -> bool:
        return abs(self.sigma) <= SIGMA_TOLERANCE

    def embed_points(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.d1 == 0:
            x = np.zeros((x.shape[0] if x.ndim == 2 else 1, 0))
        else:
            x = x.reshape(-1, self.d1)
        return np.asarray(self.embed(x), dtype=float).reshape(-1, self.d)

    def __call__(self, x, y) -> np.ndarray:
        """k(x, y) for x of shape (d1,) or (P, d1) and y of shape (P, d)."""
        y = np.atleast_2d(np.asarray(y, dtype=float))
        X, y = np.broadcast_arrays(self.embed_points(x), y)
        return np.asarray(self.func(X, y))

    def at(self, x) -> Callable[[np.ndarray], np.ndarray]:
        """The weight y -> k(x, y) of a single point x."""
        X = self.embed_points(x)

        def weight(y: np.ndarray) -> np.ndarray:
            y = np.atleast_2d(y)
            return np.asarray(self.func(np.broadcast_to(X, y.shape), y))

        return weight

    def matrix(self, xs, y) -> np.ndarray:
        """k(x_j, y_p) for every x_j and y_p, shape (J, P)."""
        X = self.embed_points(xs)
        y = np.atleast_2d(np.asarray(y, dtype=float))
        pairs_x = np.repeat(X, y.shape[0], axis=0)
        pairs_y = np.tile(y, (X.shape[0], 1))
        return np.asarray(self.func(pairs_x, pairs_y)).reshape(X.shape[0], y.shape[0])

    def singular_points(self, x) -> Optional[np.ndarray]:
        """Points of R^d where k(x, .) may be singular."""
        if not self.singular:
            return None
        return self.embed_points(x)

    def bound(self, distance: np.ndarray) -> np.ndarray:
        """norm_bound (|r|^sigma + 1), or norm_bound (|ln r| + 1) for sigma = 0."""
        r = np.asarray(distance, dtype=float)
        if self.is_logarithmic:
            return self.norm_bound * (np.abs(np.log(r)) + 1.0)
        return self.norm_bound * (r**self.sigma + 1.0)

    def sample_bound_ratio(self, samples: int = 1000, seed: SeedLike = None) -> float:
        """Largest |k(x, y)| / bound(|x - y|) over random pairs of Q1 x Q2."""
        rng = make_rng(seed)
        x = rng.random((samples, self.d1))
        lower, upper = self.domain.bounds
        y = lower + rng.random((samples, self.d)) * (upper - lower)
        keep = self.domain.contains(y)
        x, y = x[keep], y[keep]
        r = distances(self.embed_points(x), y)
        keep = r > 0
        if not np.any(keep):
            return 0.0
        values = np.abs(self(x[keep], y[keep]))
        ratio = float(np.max(values / self.bound(r[keep])))
        logger.debug("Kernel %s: sampled bound ratio %.4g over %s pairs", self.name, ratio, keep.sum())
        return ratio

    def restricted(self, domain: Region, sigma: Optional[float] = None, norm_bound: Optional[float] = None) -> "Kernel":
        """The same kernel on a subset of Q2, possibly viewed in another class."""
        return replace(
            self,
            domain=domain,
            sigma=self.sigma if sigma is None else sigma,
            norm_bound=self.norm_bound if norm_bound is None else norm_bound,
        )


def power_kernel(
    sigma: float, d: int, d1: int, s: int = 2, domain: Optional[Region] = None
) -> Kernel:
    """k(x, y) = |x - y|^sigma, and -ln|x - y| for sigma = 0.

    Examples:
        >>> k = power_kernel(-1.0, d=2, d1=1)
        >>> float(k([0.0], [[0.0, 2.0]])[0])
        0.5
    """
    if abs(sigma) <= SIGMA_TOLERANCE:

        def func(X, y):
            return -np.log(distances(X, y))

        name = "log"
    else:

        def func(X, y):
            return distances(X, y) ** sigma

        name = f"power({sigma:g})"
    return Kernel(func=func, s=s, sigma=float(sigma), d=d, d1=d1, domain=domain, name=name)


def constant_kernel(d: int, d1: int, value: float = 1.0, s: int = 8) -> Kernel:
    """k(x, y) = value; T_k f is the constant value * int f."""

    def func(X, y):
        return np.full(X.shape[0], value, dtype=float)

    return Kernel(
        func=func, s=s, sigma=0.0, d=d, d1=d1, norm_bound=abs(value), singular=False, name="constant"
    )


def smooth_kernel(d: int, d1: int, s: int = 4, scale: float = 1.0) -> Kernel:
    """k(x, y) = exp(-scale |x - y|^2), smooth on the diagonal."""

    def func(X, y):
        return np.exp(-scale * ((X - y) ** 2).sum(axis=-1))

    return Kernel(func=func, s=s, sigma=0.0, d=d, d1=d1, singular=False, name="gaussian")
