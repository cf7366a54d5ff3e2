"""Classical baselines on the quantum operator tree.

The randomized and deterministic pipelines run the same composition as the
quantum one (interpolant plus multilevel residual) and differ only in the leaf
estimators: importance-sampling Monte Carlo leaves with rate n^-1/2, or exact
sums over at most n cells with rate n^-1/d. Budgets are re-selected with the
leaf exponent of the setting.
"""

import logging
from typing import Union

from src.core.config import (
    DEFAULT_QUADRATURE,
    DEFAULT_SIMULATOR,
    QuadratureConfig,
    SimulatorConfig,
)
from src.core.data_types import EstimatorBackend, Setting
from src.core.seeds import SeedLike
from src.qestimate.integration import PointFunction
from src.qsingular.kernel import Kernel
from src.qsingular.multilevel import OperatorEstimate
from src.qsingular.smooth import smooth_apply

logger = logging.getLogger(__name__)


def randomized_pipeline(
    kernel: Kernel,
    f_oracle: PointFunction,
    r: int,
    n: int,
    seed: SeedLike = None,
    quadrature: QuadratureConfig = DEFAULT_QUADRATURE,
    simulator: SimulatorConfig = DEFAULT_SIMULATOR,
) -> OperatorEstimate:
    """T_k f with Monte Carlo leaves."""
    return smooth_apply(
        kernel,
        f_oracle,
        r,
        n,
        backend=EstimatorBackend.MONTE_CARLO,
        seed=seed,
        quadrature=quadrature,
        simulator=simulator,
    )


def deterministic_pipeline(
    kernel: Kernel,
    f_oracle: PointFunction,
    r: int,
    n: int,
    seed: SeedLike = None,
    quadrature: QuadratureConfig = DEFAULT_QUADRATURE,
    simulator: SimulatorConfig = DEFAULT_SIMULATOR,
) -> OperatorEstimate:
    """T_k f with deterministic leaves; the seed has no effect on the output."""
    return smooth_apply(
        kernel,
        f_oracle,
        r,
        n,
        backend=EstimatorBackend.DETERMINISTIC,
        seed=seed,
        quadrature=quadrature,
        simulator=simulator,
    )


def run_pipeline(
    setting: Union[Setting, str],
    kernel: Kernel,
    f_oracle: PointFunction,
    r: int,
    n: int,
    seed: SeedLike = None,
    quadrature: QuadratureConfig = DEFAULT_QUADRATURE,
    simulator: SimulatorConfig = DEFAULT_SIMULATOR,
) -> OperatorEstimate:
    """Dispatch to the quantum, randomized or deterministic pipeline.

    Examples:
        >>> from src.qsingular.kernel import constant_kernel
        >>> estimate = run_pipeline("det", constant_kernel(2, 1, s=2), lambda y: 0.0 * y[:, 0], r=1, n=8)
        >>> float(abs(estimate([[0.5]])[0])), estimate.n_queries
        (0.0, 4)
    """
    setting = setting if isinstance(setting, Setting) else Setting.from_label(setting)
    logger.debug("Running the %s pipeline with budget %s", setting.value, n)
    if setting is Setting.RANDOMIZED:
        return randomized_pipeline(kernel, f_oracle, r, n, seed, quadrature, simulator)
    if setting is Setting.DETERMINISTIC:
        return deterministic_pipeline(kernel, f_oracle, r, n, seed, quadrature, simulator)
    return smooth_apply(
        kernel,
        f_oracle,
        r,
        n,
        backend=EstimatorBackend.QUANTUM,
        seed=seed,
        quadrature=quadrature,
        simulator=simulator,
    )
