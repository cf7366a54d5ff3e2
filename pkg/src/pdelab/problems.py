"""Dirichlet problems for -Laplace u = f on the unit disk and ball.

Both Green functions come from the method of images. With
rho(x, y)^2 = |x - y|^2 + (1 - |x|^2)(1 - |y|^2), which equals |y|^2 |x - y*|^2
for the image point y* = y / |y|^2,

    d = 2:  G(x, y) = (1 / 4 pi) ln(rho^2 / |x - y|^2)
    d = 3:  G(x, y) = (1 / 4 pi) (1 / |x - y| - 1 / rho)

Points outside the ball get (1 - |x|^2) clipped to 0, which extends G by zero.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from src.core.exceptions import InputError
from src.core.registry import Registry
from src.pdelab.manifolds import ManifoldSpec, domain_manifold
from src.qestimate.regions import Ball
from src.qsingular.kernel import Kernel

logger = logging.getLogger(__name__)

PairFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]

DEFAULT_GREEN_SMOOTHNESS = 3


class ProblemRegistry(Registry):
    """Elliptic problems by string id."""

    kind = "elliptic problem"


def image_distance_squared(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """|x - y|^2 + (1 - |x|^2)(1 - |y|^2) with both factors clipped at 0."""
    gap_x = np.clip(1.0 - (X**2).sum(axis=-1), 0.0, None)
    gap_y = np.clip(1.0 - (y**2).sum(axis=-1), 0.0, None)
    return ((X - y) ** 2).sum(axis=-1) + gap_x * gap_y


def disk_green(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    squared = ((X - y) ** 2).sum(axis=-1)
    with np.errstate(divide="ignore"):
        return np.log(image_distance_squared(X, y) / squared) / (4.0 * np.pi)


def ball_green(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    distance = np.sqrt(((X - y) ** 2).sum(axis=-1))
    image = np.sqrt(image_distance_squared(X, y))
    with np.errstate(divide="ignore"):
        return (1.0 / distance - 1.0 / image) / (4.0 * np.pi)


@dataclass(frozen=True)
class EllipticProblem:
    """-Laplace u = f in the unit ball of R^d, u = 0 on the boundary.

    Args:
        name: Registry id
        d: Dimension, 2 or 3
        green: Vectorized Green function on pairs, (X (P, d), y (P, d)) -> (P,)
        norm_bound: Constant of the C^{s, 2 - d} bound of the Green function
        order2m: Order of the operator
    """

    name: str
    d: int
    green: PairFunction
    norm_bound: float
    order2m: int = 2

    def __post_init__(self):
        if self.d not in (2, 3):
            raise InputError("Only d = 2 and d = 3 are supported", details={"d": self.d})

    @property
    def sigma(self) -> float:
        """Singularity exponent 2m - d of the Green function."""
        return float(self.order2m - self.d)

    @property
    def domain(self) -> Ball:
        return Ball(np.zeros(self.d))

    def __call__(self, x, y) -> np.ndarray:
        X, Y = np.broadcast_arrays(np.atleast_2d(x), np.atleast_2d(y))
        return np.asarray(self.green(X, Y))


@ProblemRegistry.register("poisson-disk")
def poisson_disk() -> EllipticProblem:
    return EllipticProblem(name="poisson-disk", d=2, green=disk_green, norm_bound=1.0 / (2.0 * np.pi))


@ProblemRegistry.register("poisson-ball")
def poisson_ball() -> EllipticProblem:
    return EllipticProblem(name="poisson-ball", d=3, green=ball_green, norm_bound=1.0 / (4.0 * np.pi))


def get_problem(problem: Union[str, EllipticProblem]) -> EllipticProblem:
    """Resolve a registry id.

    Raises:
        UnregisteredProblemError: If the id is unknown
    """
    if isinstance(problem, EllipticProblem):
        return problem
    return ProblemRegistry.get(problem)()


def green_kernel(
    problem: Union[str, EllipticProblem],
    manifold: Optional[ManifoldSpec] = None,
    s: Optional[int] = None,
) -> Kernel:
    """The Green function as a kernel on Q1 x Q, pulled back along the manifold chart.

    Without a manifold, Q1 is the bounding-box chart of the whole domain. The
    chart's Lipschitz constant is folded into the class constant.

    Examples:
        >>> k = green_kernel("poisson-disk")
        >>> k.d, k.d1, k.sigma, round(float(k.at([0.5, 0.5])([[0.5, 0.0]])[0]), 6)
        (2, 2, 0.0, 0.110318)
    """
    problem = get_problem(problem)
    manifold = domain_manifold(problem.d) if manifold is None else manifold
    if manifold.d != problem.d:
        raise InputError(
            "Manifold and problem differ in dimension",
            details={"manifold": manifold.d, "problem": problem.d},
        )
    lipschitz = float(manifold.chart_lipschitz)
    kernel = Kernel(
        func=problem.green,
        s=DEFAULT_GREEN_SMOOTHNESS if s is None else s,
        sigma=problem.sigma,
        d=problem.d,
        d1=manifold.d1,
        norm_bound=problem.norm_bound * max(1.0, lipschitz),
        embed=manifold.chart,
        embed_lipschitz=max(lipschitz, 1e-12),
        domain=problem.domain,
        name=f"{problem.name}/{manifold.name}",
    )
    logger.debug("Green kernel %s: d1=%s s=%s", kernel.name, kernel.d1, kernel.s)
    return kernel
