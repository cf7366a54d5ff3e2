"""Multilevel estimation of T_k f(x) = int_{Q2} k(x, y) f(y) dy on Q1 = [0,1]^d1.

The estimator follows the telescoping sum

    P_m T_k f = P_0 T_k f + sum_l sum_i J_li (P_hat_li - P_li) T_k f

Base values T_k f(x), x in Gamma_0, are weighted integrals over Q2. On level l
the values at x in Gamma_hat_li are split at the ball B_li around the cube
centre with radius 2 rho_l (times the chart's Lipschitz constant):

    near  int_{B_li cap Q2} k(x, y) f(y) dy
    far   int_{Q2 minus B_li} ((P_hat - P) k(., y))(x) f(y) dy

Both are leaves of the integration estimator. The far kernel is small because
it is an interpolation error of a function that is smooth away from the ball.
Near and far leaves share the frame of Q2, so their cells and nodes agree.
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.core.config import (
    DEFAULT_QUADRATURE,
    DEFAULT_SIMULATOR,
    QuadratureConfig,
    SimulatorConfig,
)
from src.core.data_types import Backend, EstimatorBackend
from src.core.exceptions import RegionError
from src.core.seeds import SeedLike
from src.qcore.combinators import compose_linear
from src.qcore.estimator import ConstantEstimator, Estimator
from src.qestimate.integration import (
    IntegrationProblem,
    PointFunction,
    frame_cells,
    probe_lipschitz,
    weighted_integral_estimator,
)
from src.qestimate.quadrature import cell_integrals
from src.qestimate.regions import Ball, Box, Region
from src.qsingular.interp import DyadicInterp, PiecewisePolynomial
from src.qsingular.kernel import Kernel
from src.qsingular.plan import MultilevelPlan, backend_exponent, is_boosted, select_budgets

logger = logging.getLogger(__name__)

DROP_TOLERANCE = 1e-14
REFERENCE_CELLS_LEVEL = 3


@dataclass
class OperatorEstimate:
    """Output of an operator estimator: the approximant of T_k f and its cost."""

    approximant: PiecewisePolynomial
    n_queries: int
    plan: Optional[MultilevelPlan] = None

    def __call__(self, points) -> np.ndarray:
        return self.approximant(points)


def near_ball(kernel: Kernel, interp: DyadicInterp, i: int) -> Ball:
    """B(x_li, 2 rho_l) in R^d, widened by the chart's Lipschitz constant."""
    center = kernel.embed_points(interp.center(i))[0]
    return Ball(center, 2.0 * interp.radius * kernel.embed_lipschitz)


def far_weight(kernel: Kernel, nodes: np.ndarray, row: np.ndarray) -> Optional[PointFunction]:
    """y -> sum_z row[z] k(z, y), the far kernel of one fine node; None when row is zero."""
    columns = np.flatnonzero(np.abs(row) > DROP_TOLERANCE)
    if columns.size == 0:
        return None
    coefficients = row[columns]
    sources = nodes[columns]

    def weight(y: np.ndarray) -> np.ndarray:
        return coefficients @ kernel.matrix(sources, y)

    return weight


class _LeafFactory:
    """Weighted-integral leaves sharing one kernel, input and frame."""

    def __init__(
        self,
        kernel: Kernel,
        f_oracle: PointFunction,
        backend: EstimatorBackend,
        lipschitz: float,
        sim_backend: Backend,
        quadrature: QuadratureConfig,
        simulator: SimulatorConfig,
    ):
        self.kernel = kernel
        self.f_oracle = f_oracle
        self.backend = backend
        self.lipschitz = lipschitz
        self.sim_backend = sim_backend
        self.quadrature = quadrature
        self.simulator = simulator
        self.frame = Box(*kernel.domain.bounds)
        self.count = 0

    def integral(
        self,
        weight: Optional[PointFunction],
        region: Region,
        singular_points: Optional[np.ndarray],
        n: int,
        nu: int,
    ) -> Estimator:
        self.count += 1
        if weight is None:
            return ConstantEstimator(0.0)
        problem = IntegrationProblem(
            region=region,
            weight=weight,
            f_oracle=self.f_oracle,
            singular_points=singular_points,
            sigma=self.kernel.sigma,
            frame=self.frame,
            lipschitz=self.lipschitz,
        )
        try:
            return weighted_integral_estimator(
                problem,
                n,
                backend=self.backend,
                nu=nu,
                sim_backend=self.sim_backend,
                quadrature=self.quadrature,
                simulator=self.simulator,
            )
        except RegionError:
            logger.debug("Leaf region has zero measure; integral is 0")
            return ConstantEstimator(0.0)


class _Assembly:
    """Adds the leaf outputs into the nodal values of the top level."""

    def __init__(self, d1: int, top: int, degree: int):
        self.d1 = d1
        self.top = top
        self.degree = degree
        self.blocks: List[Tuple[slice, np.ndarray, Optional[np.ndarray]]] = []
        self.size = 0

    def add_block(self, count: int, operator: np.ndarray, cubes: Optional[np.ndarray]):
        """Register `count` consecutive leaf outputs mapped by `operator` onto `cubes`."""
        self.blocks.append((slice(self.size, self.size + count), operator, cubes))
        self.size += count

    def __call__(self, values: Sequence) -> PiecewisePolynomial:
        values = np.asarray(values)
        result = PiecewisePolynomial.zeros(self.d1, self.top, self.degree, dtype=values.dtype)
        coeffs = result.coeffs
        for span, operator, cubes in self.blocks:
            block = operator @ values[span]
            if cubes is None:
                coeffs += block.reshape(coeffs.shape)
            else:
                coeffs[cubes] += block.reshape(cubes.shape[0], -1)
        return result


def _paired(near: np.ndarray, far: np.ndarray) -> np.ndarray:
    """Operator on stacked (near, far) leaf outputs that adds them pairwise."""
    return np.hstack([near, far])


def multilevel_estimator(
    kernel: Kernel,
    f_oracle: PointFunction,
    n: int,
    backend: Union[EstimatorBackend, str] = EstimatorBackend.QUANTUM,
    plan: Optional[MultilevelPlan] = None,
    lipschitz: Optional[float] = None,
    sim_backend: Union[Backend, str] = Backend.ANALYTIC,
    quadrature: QuadratureConfig = DEFAULT_QUADRATURE,
    simulator: SimulatorConfig = DEFAULT_SIMULATOR,
) -> Tuple[Estimator, MultilevelPlan]:
    """Estimator of P_m T_k f whose outputs are PiecewisePolynomial objects.

    Args:
        kernel: Kernel of class C^{s,sigma}
        f_oracle: Vectorized input with |f| <= 1 on Q2
        n: Nominal budget
        backend: Leaf estimator backend
        plan: Budget plan, selected from the kernel class and backend when None
        lipschitz: Lipschitz constant of f, probed once when None
    """
    backend = EstimatorBackend(backend)
    sim_backend = Backend(sim_backend)
    if plan is None:
        plan = select_budgets(
            n,
            kernel.s,
            kernel.sigma,
            kernel.d,
            kernel.d1,
            leaf_exponent=backend_exponent(backend, kernel.d),
            boosted=is_boosted(backend),
        )
    frame = Box(*kernel.domain.bounds)
    if lipschitz is None:
        lipschitz = probe_lipschitz(f_oracle, frame, kernel.domain)
    leaves = _LeafFactory(kernel, f_oracle, backend, lipschitz, sim_backend, quadrature, simulator)
    degree = kernel.degree
    assembly = _Assembly(kernel.d1, plan.m, degree)
    subs: List[Estimator] = []

    if kernel.d1 == 0:
        x = np.zeros((1, 0))
        subs.append(leaves.integral(kernel.at(x), kernel.domain, kernel.singular_points(x), plan.N0, plan.nu0))
        assembly.add_block(1, np.ones((1, 1)), None)
        return compose_linear(subs, post=lambda values: assembly(values)), plan

    base = DyadicInterp(kernel.d1, 0, degree)
    for x in base.local_nodes(0):
        subs.append(leaves.integral(kernel.at(x), kernel.domain, kernel.singular_points(x), plan.N0, plan.nu0))
    assembly.add_block(base.n_local, base.coarse_embedding(plan.m), None)
    logger.info("Base level: %s integrals with budget %s, boost %s", base.n_local, plan.N0, plan.nu0)

    for level in range(plan.m):
        interp = DyadicInterp(kernel.d1, level, degree)
        difference = interp.difference_operator()
        operator = interp.hat_embedding(plan.m) @ difference
        stacked = _paired(operator, operator)
        budget, nu = plan.budgets[level], plan.boosts[level]
        for i in range(interp.n_cubes):
            nodes = interp.child_nodes(i)
            ball = near_ball(kernel, interp, i)
            near_region = kernel.domain & ball
            far_region = kernel.domain & ~ball
            for x in nodes:
                subs.append(leaves.integral(kernel.at(x), near_region, kernel.singular_points(x), budget, nu))
            for row in difference:
                subs.append(leaves.integral(far_weight(kernel, nodes, row), far_region, None, budget, nu))
            assembly.add_block(2 * interp.n_fine, stacked, interp.subcube_indices(i, plan.m))
        logger.info(
            "Level %s: %s cubes, budget %s, boost %s", level, interp.n_cubes, budget, nu
        )

    estimator = compose_linear(subs, post=lambda values: assembly(values))
    logger.debug("Multilevel tree: %s leaves, %s queries", leaves.count, estimator.n_queries)
    return estimator, plan


def multilevel_apply(
    kernel: Kernel,
    f_oracle: PointFunction,
    n: int,
    backend: Union[EstimatorBackend, str] = EstimatorBackend.QUANTUM,
    seed: SeedLike = None,
    plan: Optional[MultilevelPlan] = None,
    lipschitz: Optional[float] = None,
    sim_backend: Union[Backend, str] = Backend.ANALYTIC,
    quadrature: QuadratureConfig = DEFAULT_QUADRATURE,
    simulator: SimulatorConfig = DEFAULT_SIMULATOR,
) -> OperatorEstimate:
    """Approximate T_k f on [0,1]^d1 with the multilevel estimator.

    Returns:
        The piecewise polynomial approximant, the queries spent and the plan
    """
    estimator, plan = multilevel_estimator(
        kernel, f_oracle, n, backend, plan, lipschitz, sim_backend, quadrature, simulator
    )
    return OperatorEstimate(estimator.estimate(seed), estimator.n_queries, plan)


def operator_reference(
    kernel: Kernel,
    f: PointFunction,
    points: np.ndarray,
    cells: Optional[Tuple[np.ndarray, np.ndarray]] = None,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
) -> np.ndarray:
    """T_k f at points of Q1 by cell quadrature, with singularity splitting.

    Args:
        kernel: The kernel
        f: Vectorized input, evaluated inside the weight
        points: Points of Q1, shape (P, d1)
        cells: Cell corners to integrate over, dyadic cells of the domain frame by default
    """
    if cells is None:
        cells = frame_cells(Box(*kernel.domain.bounds), REFERENCE_CELLS_LEVEL)
    lower, upper = cells
    points = np.asarray(points, dtype=float)
    if kernel.d1 == 0:
        points = np.zeros((points.shape[0] if points.ndim == 2 else 1, 0))
    else:
        points = points.reshape(-1, kernel.d1)
    values = []
    for x in points:
        k_x = kernel.at(x)

        def weight(y, k_x=k_x):
            return k_x(y) * np.broadcast_to(f(y), (np.atleast_2d(y).shape[0],))

        integrals = cell_integrals(
            weight,
            lower,
            upper,
            region=kernel.domain,
            singular_points=kernel.singular_points(x),
            sigma=kernel.sigma,
            config=config,
        )
        values.append(integrals.sum())
    return np.asarray(values)


def interpolate_operator(
    kernel: Kernel,
    f: PointFunction,
    level: int,
    cells: Optional[Tuple[np.ndarray, np.ndarray]] = None,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
) -> PiecewisePolynomial:
    """P_level T_k f with every nodal value computed by quadrature."""
    shell = PiecewisePolynomial.zeros(kernel.d1, level, kernel.degree)
    if kernel.d1 == 0:
        value = operator_reference(kernel, f, np.zeros((1, 0)), cells, config)[0]
        return PiecewisePolynomial(0, 0, kernel.degree, np.array([[value]]))
    values = operator_reference(kernel, f, shell.grid_points(), cells, config)
    return PiecewisePolynomial.from_grid_values(values, kernel.d1, level, kernel.degree)


def near_field_norms(
    kernel: Kernel,
    level: int,
    cubes: Optional[Sequence[int]] = None,
    cells_level: int = REFERENCE_CELLS_LEVEL,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
) -> np.ndarray:
    """||g_lix||_L1 for x in Gamma_hat_li, shape (len(cubes), F)."""
    return _field_norms(kernel, level, cubes, cells_level, config, near=True)


def far_field_norms(
    kernel: Kernel,
    level: int,
    cubes: Optional[Sequence[int]] = None,
    cells_level: int = REFERENCE_CELLS_LEVEL,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
) -> np.ndarray:
    """||h_lix||_L1 for x in Gamma_hat_li, shape (len(cubes), F)."""
    return _field_norms(kernel, level, cubes, cells_level, config, near=False)


def _field_norms(kernel, level, cubes, cells_level, config, near: bool) -> np.ndarray:
    interp = DyadicInterp(kernel.d1, level, kernel.degree)
    lower, upper = frame_cells(Box(*kernel.domain.bounds), cells_level)
    difference = interp.difference_operator()
    cubes = range(interp.n_cubes) if cubes is None else cubes
    norms = []
    for i in cubes:
        nodes = interp.child_nodes(i)
        ball = near_ball(kernel, interp, i)
        row_norms = []
        for j, x in enumerate(nodes):
            if near:
                weight: Optional[Callable] = kernel.at(x)
                region, singular = kernel.domain & ball, kernel.singular_points(x)
            else:
                weight = far_weight(kernel, nodes, difference[j])
                region, singular = kernel.domain & ~ball, None
            if weight is None:
                row_norms.append(0.0)
                continue
            integrals = cell_integrals(
                lambda y, weight=weight: np.abs(weight(y)),
                lower,
                upper,
                region=region,
                singular_points=singular,
                sigma=kernel.sigma,
                config=config,
            )
            row_norms.append(float(np.sum(integrals)))
        norms.append(row_norms)
    return np.asarray(norms)
