"""Weighted integration I_{Q,g} f through piecewise constant interpolation.

The bounding frame of Q is cut into 2^(dk) dyadic cells Q_i. Cells that miss Q
are dropped, each remaining cell gets a point x_i in Q and the weight
w_i = int_{Q_i cap Q} g, and

    I_{Q,g} f ~ sum_i w_i f(x_i) = S_{N,h} f,  h(i) = N w_i,

which is handed to the weighted mean.
"""

import logging
from dataclasses import dataclass, field
from math import ceil, floor, log2
from typing import Callable, Optional, Tuple, Union

import numpy as np

from src.core.config import (
    DEFAULT_QUADRATURE,
    DEFAULT_SIMULATOR,
    QuadratureConfig,
    SimulatorConfig,
)
from src.core.data_types import Backend, EstimatorBackend
from src.core.exceptions import InputError, RegionError
from src.core.lagrange import tensor_nodes
from src.core.seeds import SeedLike
from src.qcore.estimator import Estimator
from src.qestimate.base import WeightedSumProblem, check_bounded
from src.qestimate.quadrature import cell_integrals
from src.qestimate.regions import Box, CellClass, Region
from src.qestimate.weighted import weighted_mean_estimator

logger = logging.getLogger(__name__)

PointFunction = Callable[[np.ndarray], np.ndarray]
Sampler = Callable[[np.random.Generator, int], np.ndarray]

PROBE_POINTS_PER_AXIS = 9


def evaluate_points(f: PointFunction, points: np.ndarray) -> np.ndarray:
    """Evaluate a vectorized function on points of shape (P, d) and check |f| <= 1."""
    points = np.atleast_2d(points)
    values = np.asarray(f(points))
    if values.ndim == 0:
        values = np.full(points.shape[0], values[()])
    check_bounded(values)
    return values


@dataclass
class IntegrationProblem:
    """The weighted integral I_{Q,g} f = int_Q g(x) f(x) dx.

    Args:
        region: The set Q
        weight: Vectorized weight g, integrable on Q
        f_oracle: Vectorized continuous f with |f| <= 1 on Q
        l1_bound: ||g||_{L1(Q)} when known
        singular_points: Points where g may be singular
        sigma: Order of the singularity of g, 0 for logarithmic
        frame: Box cut into dyadic cells, the bounding box of Q by default
        lipschitz: Lipschitz constant of f, probed when None
        sampler: Draws points from the density |g| / ||g||
    """

    region: Region
    weight: PointFunction
    f_oracle: PointFunction
    l1_bound: Optional[float] = None
    singular_points: Optional[np.ndarray] = None
    sigma: float = 0.0
    frame: Optional[Box] = None
    lipschitz: Optional[float] = None
    sampler: Optional[Sampler] = None
    _probed: Optional[float] = field(default=None, init=False, repr=False)

    def __post_init__(self):
        if self.frame is None:
            self.frame = Box(*self.region.bounds)
        if self.frame.dim != self.region.dim:
            raise RegionError(
                "Frame and region differ in dimension",
                details={"frame": self.frame.dim, "region": self.region.dim},
            )
        if self.singular_points is not None:
            self.singular_points = np.atleast_2d(np.asarray(self.singular_points, dtype=float))
        if self.lipschitz is not None and self.lipschitz < 0:
            raise InputError("Lipschitz bound must be nonnegative", details={"lipschitz": self.lipschitz})

    @property
    def d(self) -> int:
        return self.region.dim

    def lipschitz_bound(self) -> float:
        """The given Lipschitz constant, or a finite-difference probe of f."""
        if self.lipschitz is not None:
            return self.lipschitz
        if self._probed is None:
            self._probed = probe_lipschitz(self.f_oracle, self.frame, self.region)
            logger.debug("Probed Lipschitz bound %.4g", self._probed)
        return self._probed


@dataclass(frozen=True)
class CellQuadrature:
    """Dyadic cells meeting Q, with their points x_i and weights w_i."""

    k: int
    lower: np.ndarray
    upper: np.ndarray
    points: np.ndarray
    weights: np.ndarray

    @property
    def N(self) -> int:
        return int(self.weights.shape[0])

    @property
    def l1_norm(self) -> float:
        """||h||_{L1^N} = sum |w_i|."""
        return float(np.abs(self.weights).sum())

    def sum_problem(self, values: np.ndarray) -> WeightedSumProblem:
        """S_{N,h} with h = N w over the given values f(x_i)."""
        return WeightedSumProblem(self.N, self.N * self.weights, values)


def frame_cells(frame: Box, k: int) -> Tuple[np.ndarray, np.ndarray]:
    """Corners of the 2^(dk) dyadic cells of a frame, C-ordered."""
    if k < 0:
        raise InputError("Refinement level must be nonnegative", details={"k": k})
    steps = np.arange(2**k) / 2**k
    offsets = tensor_nodes(steps, frame.dim)
    lower = frame.lower + offsets * frame.widths
    return lower, lower + frame.widths / 2**k


def probe_lipschitz(
    f: PointFunction,
    frame: Box,
    region: Optional[Region] = None,
    points_per_axis: int = PROBE_POINTS_PER_AXIS,
) -> float:
    """Heuristic Lipschitz constant: largest axis difference quotient on a grid, times sqrt(d).

    Only grid points inside the region are evaluated.
    """
    d = frame.dim
    axis_points = np.linspace(0.0, 1.0, points_per_axis)
    grid = frame.lower + tensor_nodes(axis_points, d) * frame.widths
    mask = np.ones(grid.shape[0], dtype=bool) if region is None else region.contains(grid)
    values = np.full(grid.shape[0], np.nan, dtype=complex)
    if np.any(mask):
        values[mask] = np.asarray(f(grid[mask]), dtype=complex).reshape(-1)
    values = values.reshape((points_per_axis,) * d)
    spacing = frame.widths / (points_per_axis - 1)
    slopes = [0.0]
    for axis in range(d):
        quotient = np.abs(np.diff(values, axis=axis)) / spacing[axis]
        quotient = quotient[np.isfinite(quotient)]
        if quotient.size:
            slopes.append(float(quotient.max()))
    return max(slopes) * np.sqrt(d)


def choose_refinement(n: int, lipschitz: float, frame: Box, max_cells: int) -> int:
    """Smallest k with lipschitz * diam(cell) <= 1/n, capped so that 2^(dk) <= max_cells."""
    if n < 1:
        raise InputError("Budget must be positive", details={"n": n})
    target = n * lipschitz * frame.diameter
    k = max(0, ceil(log2(target))) if target > 1 else 0
    k_max = max(0, floor(log2(max_cells) / frame.dim))
    if k > k_max:
        logger.warning(
            "Refinement %s capped at %s (max_cells=%s); interpolation error exceeds 1/n",
            k,
            k_max,
            max_cells,
        )
        k = k_max
    return k


def deterministic_refinement(n: int, d: int, max_cells: int) -> int:
    """Level whose 2^(dk) cells fit in the budget n."""
    k = floor(log2(max(n, 1)) / d + 1e-12)
    return min(k, max(0, floor(log2(max_cells) / d)))


def discretize(
    problem: IntegrationProblem, k: int, config: QuadratureConfig = DEFAULT_QUADRATURE
) -> CellQuadrature:
    """Cell weights w_i and points x_i at refinement level k.

    Raises:
        RegionError: If no cell meets Q in positive measure
    """
    lower, upper = frame_cells(problem.frame, k)
    codes = np.asarray(problem.region.classify(lower, upper))
    keep = codes != CellClass.OUTSIDE
    if not np.any(keep):
        raise RegionError("Region has zero measure in its frame", details={"k": k})
    lower, upper = lower[keep], upper[keep]
    weights = cell_integrals(
        problem.weight,
        lower,
        upper,
        region=problem.region,
        singular_points=problem.singular_points,
        sigma=problem.sigma,
        config=config,
    )
    points = (lower + upper) / 2.0
    outside = ~problem.region.contains(points)
    if np.any(outside):
        points[outside] = problem.region.project(points[outside])
    logger.debug("Discretized at k=%s: %s of %s cells kept", k, lower.shape[0], keep.shape[0])
    return CellQuadrature(k=k, lower=lower, upper=upper, points=points, weights=weights)


def refinement_for(
    problem: IntegrationProblem,
    n: int,
    backend: EstimatorBackend,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
) -> int:
    """Level used for budget n: cells within budget for deterministic sums, the Lipschitz rule otherwise."""
    if backend is EstimatorBackend.DETERMINISTIC:
        return deterministic_refinement(n, problem.d, config.max_cells)
    return choose_refinement(n, problem.lipschitz_bound(), problem.frame, config.max_cells)


def weighted_integral_estimator(
    problem: IntegrationProblem,
    n: int,
    k_refinement: Optional[int] = None,
    backend: Union[EstimatorBackend, str] = EstimatorBackend.QUANTUM,
    nu: int = 1,
    sim_backend: Union[Backend, str] = Backend.ANALYTIC,
    quadrature: QuadratureConfig = DEFAULT_QUADRATURE,
    simulator: SimulatorConfig = DEFAULT_SIMULATOR,
) -> Estimator:
    """Estimator of I_{Q,g} f with budget n per repetition."""
    backend = EstimatorBackend(backend)
    k = refinement_for(problem, n, backend, quadrature) if k_refinement is None else k_refinement
    quad = discretize(problem, k, quadrature)
    values = evaluate_points(problem.f_oracle, quad.points)
    return weighted_mean_estimator(quad.sum_problem(values), n, backend, nu, sim_backend, simulator)


def weighted_integral(
    problem: IntegrationProblem,
    n: int,
    k_refinement: Optional[int] = None,
    backend: Union[EstimatorBackend, str] = EstimatorBackend.QUANTUM,
    seed: SeedLike = None,
    nu: int = 1,
    sim_backend: Union[Backend, str] = Backend.ANALYTIC,
    quadrature: QuadratureConfig = DEFAULT_QUADRATURE,
    simulator: SimulatorConfig = DEFAULT_SIMULATOR,
):
    """Estimate int_Q g f with at most n queries per repetition.

    Raises:
        RegionError: If Q has zero measure
    """
    est = weighted_integral_estimator(
        problem, n, k_refinement, backend, nu, sim_backend, quadrature, simulator
    )
    return est.estimate(seed)
