"""T_k f for inputs f in C^r: a deterministic interpolant plus the multilevel residual.

With n1 = n // 2 point values the interpolant P f is built classically, T_k(P f)
is computed by cell quadrature on the cells of P, and the multilevel estimator
is run on the scaled residual (f - P f) / c with the remaining budget. When
d + sigma < d1 < d the same composition runs on every slab H_l with the
restricted kernel k_l, and the randomized part of each slab is repeated and
combined by a componentwise median.
"""

import logging
from typing import Tuple, Union

import numpy as np

from src.classical.interpolant import det_interp, det_interp_on_boxes, residual_scale
from src.core.config import (
    DEFAULT_QUADRATURE,
    DEFAULT_SIMULATOR,
    QuadratureConfig,
    SimulatorConfig,
)
from src.core.data_types import Backend, EstimatorBackend
from src.core.exceptions import InputError
from src.core.seeds import SeedLike
from src.qcore.combinators import boost_median, compose_linear
from src.qcore.estimator import ConstantEstimator, Estimator
from src.qestimate.integration import PointFunction
from src.qestimate.regions import Box
from src.qsingular.interp import PiecewisePolynomial
from src.qsingular.kernel import Kernel
from src.qsingular.multilevel import OperatorEstimate, interpolate_operator, multilevel_estimator
from src.qsingular.plan import MultilevelPlan, backend_exponent, is_boosted, select_budgets
from src.qsingular.slabs import SlabDecomposition, needs_slabs

logger = logging.getLogger(__name__)

RESIDUAL_SAFETY = 2.0
RESIDUAL_TOLERANCE = 1e-12


class CoefficientView(Estimator):
    """Outputs the coefficient array of a piecewise-polynomial estimator."""

    def __init__(self, est: Estimator):
        self.est = est

    @property
    def n_queries(self) -> int:
        return self.est.n_queries

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        return self.est.sample(rng).coeffs


def median_of_runs(est: Estimator, nu: int, plan: MultilevelPlan) -> Estimator:
    """Componentwise lower median of nu runs of a piecewise-polynomial estimator."""
    if nu == 1:
        return est
    boosted = boost_median(CoefficientView(est), nu)
    return compose_linear(
        [boosted],
        post=lambda values: PiecewisePolynomial(plan.d1, plan.m, plan.degree, values[0]),
    )


class _Composition:
    """Shared options of the deterministic and randomized parts."""

    def __init__(self, backend, sim_backend, quadrature, simulator):
        self.backend = EstimatorBackend(backend)
        self.sim_backend = Backend(sim_backend)
        self.quadrature = quadrature
        self.simulator = simulator

    def plan(self, kernel: Kernel, n: int) -> MultilevelPlan:
        return select_budgets(
            n,
            kernel.s,
            kernel.sigma,
            kernel.d,
            kernel.d1,
            leaf_exponent=backend_exponent(self.backend, kernel.d),
            boosted=is_boosted(self.backend),
        )

    def combine(self, kernel: Kernel, f_oracle: PointFunction, interpolant, n: int, nu: int = 1) -> Estimator:
        """Constant T_k(P f) part plus the scaled multilevel residual part."""
        plan = self.plan(kernel, n)
        det_values = interpolate_operator(
            kernel, interpolant, plan.m, interpolant.cell_corners(), self.quadrature
        )
        det = ConstantEstimator(det_values, interpolant.sample_count)
        scale = RESIDUAL_SAFETY * residual_scale(f_oracle, interpolant, kernel.domain)
        if scale <= RESIDUAL_TOLERANCE:
            logger.info("Residual vanishes; skipping the multilevel part")
            return det

        def residual(y: np.ndarray) -> np.ndarray:
            return (f_oracle(y) - interpolant(y)) / scale

        ml, _ = multilevel_estimator(
            kernel,
            residual,
            n,
            backend=self.backend,
            plan=plan,
            sim_backend=self.sim_backend,
            quadrature=self.quadrature,
            simulator=self.simulator,
        )
        logger.debug("Residual scale %.4g, multilevel queries %s", scale, ml.n_queries)
        return compose_linear([det, (median_of_runs(ml, nu, plan), scale)])


def split_budget(n: int) -> Tuple[int, int]:
    """Deterministic and randomized shares n1 = n // 2 and n2 = n - n1."""
    n1 = n // 2
    return n1, n - n1


def smooth_estimator(
    kernel: Kernel,
    f_oracle: PointFunction,
    r: int,
    n: int,
    backend: Union[EstimatorBackend, str] = EstimatorBackend.QUANTUM,
    sim_backend: Union[Backend, str] = Backend.ANALYTIC,
    quadrature: QuadratureConfig = DEFAULT_QUADRATURE,
    simulator: SimulatorConfig = DEFAULT_SIMULATOR,
) -> Estimator:
    """Estimator of T_k f whose outputs are PiecewisePolynomial objects.

    Args:
        kernel: Kernel of class C^{s,sigma}
        f_oracle: Vectorized input with ||f||_{C^r} <= 1, defined on the bounding box of Q2
        r: Input smoothness, the interpolation degree
        n: Nominal budget

    Raises:
        InputError: If r < 1 or the deterministic share is below (r+1)^d
    """
    if r < 1:
        raise InputError("Input smoothness r must be at least 1", details={"r": r})
    composition = _Composition(backend, sim_backend, quadrature, simulator)

    if needs_slabs(kernel):
        decomposition = SlabDecomposition(kernel, r, n)
        parts = []
        for slab in decomposition.slabs:
            interpolant = det_interp_on_boxes(f_oracle, r, slab.region, slab.cell_side)
            nu = slab.boost if is_boosted(composition.backend) else 1
            parts.append(composition.combine(slab.kernel, f_oracle, interpolant, slab.n, nu))
            logger.debug("Slab %s: %s samples, budget %s, boost %s", slab.level, interpolant.sample_count, slab.n, nu)
        logger.info("Slab path: %s slabs, total budget %s", len(parts), decomposition.total_budget)
        return compose_linear(parts)

    n1, n2 = split_budget(n)
    if n2 < 2:
        raise InputError("Budget too small to split", details={"n": n})
    interpolant = det_interp(f_oracle, r, kernel.d, n1, Box(*kernel.domain.bounds))
    logger.info("Deterministic part: %s samples; randomized budget %s", interpolant.sample_count, n2)
    return composition.combine(kernel, f_oracle, interpolant, n2)


def smooth_apply(
    kernel: Kernel,
    f_oracle: PointFunction,
    r: int,
    n: int,
    backend: Union[EstimatorBackend, str] = EstimatorBackend.QUANTUM,
    seed: SeedLike = None,
    sim_backend: Union[Backend, str] = Backend.ANALYTIC,
    quadrature: QuadratureConfig = DEFAULT_QUADRATURE,
    simulator: SimulatorConfig = DEFAULT_SIMULATOR,
) -> OperatorEstimate:
    """Approximate T_k f for a C^r input with the budget n."""
    estimator = smooth_estimator(kernel, f_oracle, r, n, backend, sim_backend, quadrature, simulator)
    return OperatorEstimate(estimator.estimate(seed), estimator.n_queries)
