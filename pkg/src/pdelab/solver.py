"""The solution operator S f = u|_M and a quadrature check of the Green representation."""

import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.special import roots_legendre

from src.classical.pipelines import run_pipeline
from src.core.config import (
    DEFAULT_QUADRATURE,
    DEFAULT_SIMULATOR,
    QuadratureConfig,
    SimulatorConfig,
)
from src.core.data_types import Setting
from src.core.exceptions import InputError
from src.core.seeds import SeedLike
from src.pdelab.manifolds import ManifoldSpec
from src.pdelab.problems import EllipticProblem, get_problem, green_kernel
from src.pdelab.rhs import RightHandSide, make_rhs
from src.qestimate.integration import PointFunction
from src.qestimate.quadrature import radial_rule
from src.qsingular.multilevel import OperatorEstimate

logger = logging.getLogger(__name__)

CIRCLE_DIRECTIONS = 256
SPHERE_POLAR_NODES = 48
SPHERE_AZIMUTHS = 96


@dataclass
class ManifoldSolution:
    """Estimated u on the probe grid of a manifold.

    Args:
        points: Probe points in the domain, shape (P, d)
        values: Estimates of u at the points
        n_queries: Measured query count
        estimate: The operator estimate in chart coordinates, already rescaled
    """

    points: np.ndarray
    values: np.ndarray
    n_queries: int
    estimate: OperatorEstimate

    def error(self, exact: np.ndarray) -> float:
        """Sup error over the probe grid."""
        return float(np.max(np.abs(self.values - np.asarray(exact))))


def solve_on_manifold(
    problem: Union[str, EllipticProblem],
    rhs: Union[str, RightHandSide],
    manifold: ManifoldSpec,
    n: int,
    setting: Union[Setting, str] = Setting.QUANTUM,
    seed: SeedLike = None,
    r: int = 1,
    s: Optional[int] = None,
    quadrature: QuadratureConfig = DEFAULT_QUADRATURE,
    simulator: SimulatorConfig = DEFAULT_SIMULATOR,
) -> ManifoldSolution:
    """Approximate u on the probe grid of M with n queries.

    f is scaled into the unit ball of C^r, T_k is applied with the Green kernel
    pulled back along the chart of M, and the result is scaled back.

    Raises:
        InputError: If M does not live in the problem's dimension
    """
    problem = get_problem(problem)
    rhs = make_rhs(rhs, problem.d, r) if isinstance(rhs, str) else rhs
    if rhs.d != problem.d or manifold.d != problem.d:
        raise InputError(
            "Problem, right-hand side and manifold differ in dimension",
            details={"problem": problem.d, "rhs": rhs.d, "manifold": manifold.d},
        )
    kernel = green_kernel(problem, manifold, s)
    scale = rhs.scale
    estimate = run_pipeline(
        setting, kernel, rhs.scaled(), r, n, seed, quadrature=quadrature, simulator=simulator
    )
    rescaled = OperatorEstimate(estimate.approximant * scale, estimate.n_queries, estimate.plan)
    values = rescaled(manifold.probe_params)
    logger.info(
        "Solved %s with %s on %s: %s probe points, %s queries",
        problem.name,
        rhs.family,
        manifold.name,
        values.shape[0],
        estimate.n_queries,
    )
    return ManifoldSolution(
        points=manifold.probe_points, values=values, n_queries=estimate.n_queries, estimate=rescaled
    )


def unit_directions(d: int):
    """Directions on the unit sphere with quadrature weights summing to its area."""
    if d == 2:
        angle = 2.0 * np.pi * np.arange(CIRCLE_DIRECTIONS) / CIRCLE_DIRECTIONS
        weights = np.full(CIRCLE_DIRECTIONS, 2.0 * np.pi / CIRCLE_DIRECTIONS)
        return np.stack([np.cos(angle), np.sin(angle)], axis=1), weights
    if d == 3:
        t, t_weights = roots_legendre(SPHERE_POLAR_NODES)
        phi = 2.0 * np.pi * np.arange(SPHERE_AZIMUTHS) / SPHERE_AZIMUTHS
        T, PHI = np.meshgrid(t, phi, indexing="ij")
        ring = np.sqrt(1.0 - T**2)
        directions = np.stack([ring * np.cos(PHI), ring * np.sin(PHI), T], axis=-1).reshape(-1, 3)
        weights = np.repeat(t_weights, SPHERE_AZIMUTHS) * 2.0 * np.pi / SPHERE_AZIMUTHS
        return directions, weights
    raise InputError("Directions are available for d = 2 and d = 3", details={"d": d})


def green_integral(
    problem: Union[str, EllipticProblem],
    f: PointFunction,
    x,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
) -> float:
    """int_Q G(x, y) f(y) dy in polar coordinates centered at an inner point x.

    Along each direction w the ray runs to the sphere at
    R = -x.w + sqrt((x.w)^2 + 1 - |x|^2), and the radial variable uses the
    graded rule of the cell quadrature.
    """
    problem = get_problem(problem)
    x = np.asarray(x, dtype=float).reshape(-1)
    d = problem.d
    if float(x @ x) >= 1.0:
        raise InputError("The point must lie inside the unit ball", details={"x": x.tolist()})
    directions, direction_weights = unit_directions(d)
    projection = directions @ x
    reach = -projection + np.sqrt(projection**2 + 1.0 - x @ x)
    u, u_weights = radial_rule(d - 1 + min(problem.sigma, 0.0), config.radial_levels, config.degree)
    rho = reach[:, None] * u[None, :]
    points = x + rho[..., None] * directions[:, None, :]
    flat = points.reshape(-1, d)
    values = problem.green(np.broadcast_to(x, flat.shape), flat) * np.broadcast_to(f(flat), (flat.shape[0],))
    values = values.reshape(rho.shape)
    radial = (values * rho ** (d - 1)) @ u_weights * reach
    return float(radial @ direction_weights)


def green_representation_check(
    problem: Union[str, EllipticProblem],
    rhs: Union[str, RightHandSide],
    points,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
) -> float:
    """Largest |int G(x, .) f - u(x)| over the given inner points."""
    problem = get_problem(problem)
    rhs = make_rhs(rhs, problem.d) if isinstance(rhs, str) else rhs
    points = np.atleast_2d(np.asarray(points, dtype=float))
    quadrature_values = np.array([green_integral(problem, rhs.f, x, config) for x in points])
    gap = float(np.max(np.abs(quadrature_values - rhs.exact(points))))
    logger.debug("Green representation check for %s/%s: %.3g", problem.name, rhs.family, gap)
    return gap
