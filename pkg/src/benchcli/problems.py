"""Benchmark problems: a fixed instance per config and a per-trial runner.

Every registered factory takes an ExperimentConfig and returns a
BenchmarkProblem whose runner maps (n, rng) to (error, n_queries). Estimators
are built once per budget and sampled once per trial; reference values are
computed once per instance.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, NamedTuple, Tuple

import numpy as np

from src.benchcli.config import ExperimentConfig
from src.core.data_types import EstimatorBackend
from src.core.lagrange import tensor_nodes
from src.core.registry import Registry
from src.qcore.estimator import Estimator
from src.qestimate.base import make_mean_estimator
from src.qestimate.integration import IntegrationProblem, frame_cells, weighted_integral_estimator
from src.qestimate.quadrature import cell_integrals
from src.qestimate.regions import Box
from src.qsingular.kernel import power_kernel
from src.qsingular.multilevel import multilevel_estimator, operator_reference
from src.qsingular.plan import RateExponents, backend_exponent, is_boosted, select_budgets
from src.qsingular.smooth import smooth_estimator
from src.pdelab.manifolds import make_manifold
from src.pdelab.problems import get_problem, green_kernel
from src.pdelab.rhs import make_rhs

logger = logging.getLogger(__name__)

DEFAULT_MEAN_SIZE = 1024
DEFAULT_CIRCLE_RADIUS = 0.5
INSTANCE_SPAWN_KEY = 1_000_003
PROBES_PER_AXIS = 9
REFERENCE_LEVEL = 5


class BenchmarkRegistry(Registry):
    """Benchmark problems by string id."""

    kind = "benchmark problem"


class TrialOutcome(NamedTuple):
    """One trial: the estimate, its error and the measured queries."""

    estimate: Any
    error: float
    n_queries: int


@dataclass
class BenchmarkProblem:
    """A benchmark instance.

    Args:
        name: Registry id
        exponent: Predicted exponent of the error in n for the configured leaves
        prepare: Builds the estimator of a budget
        trial: Runs one trial with its own generator
    """

    name: str
    exponent: float
    prepare: Callable[[int], Estimator]
    trial: Callable[[int, np.random.Generator], TrialOutcome]

    def __call__(self, n: int, rng: np.random.Generator) -> Tuple[float, int]:
        outcome = self.trial(n, rng)
        return outcome.error, outcome.n_queries


def build_problem(config: ExperimentConfig) -> BenchmarkProblem:
    """Instantiate the configured benchmark problem.

    Raises:
        UnregisteredProblemError: If the problem id is unknown
    """
    problem = BenchmarkRegistry.get(config.problem)(config)
    logger.info("Benchmark %s with %s leaves, predicted exponent %.3g", problem.name, config.leaf_backend.value, problem.exponent)
    return problem


def instance_rng(config: ExperimentConfig) -> np.random.Generator:
    """Generator of the fixed problem instance, independent of the trial generators."""
    return np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(INSTANCE_SPAWN_KEY,)))


def smooth_setting_exponent(rates: RateExponents, backend: EstimatorBackend) -> float:
    """Exponent of the C^r composition for a leaf backend; r/d for deterministic leaves."""
    if backend is EstimatorBackend.DETERMINISTIC:
        return rates.r / rates.d
    return rates.smooth_exponent(backend_exponent(backend, rates.d))


def probe_grid(d1: int) -> np.ndarray:
    if d1 == 0:
        return np.zeros((1, 0))
    return tensor_nodes(np.linspace(0.0, 1.0, PROBES_PER_AXIS), d1)


def _operator_problem(name: str, config: ExperimentConfig, build, f, exponent: float) -> BenchmarkProblem:
    """Shared runner of the operator benchmarks: sup error over a probe grid of Q1."""
    kernel = power_kernel(config.sigma, d=config.d, d1=config.d1, s=config.s)
    probes = probe_grid(config.d1)
    reference = operator_reference(kernel, f, probes)

    @lru_cache(maxsize=None)
    def prepare(n: int) -> Estimator:
        return build(kernel, n)

    def trial(n: int, rng: np.random.Generator) -> TrialOutcome:
        est = prepare(n)
        values = est.sample(rng)(probes)
        return TrialOutcome(values, float(np.max(np.abs(values - reference))), est.n_queries)

    return BenchmarkProblem(name, exponent, prepare, trial)


@BenchmarkRegistry.register("mean")
def mean_benchmark(config: ExperimentConfig) -> BenchmarkProblem:
    """S_N f for a random f with values in [0, 1]."""
    N = int(config.size or DEFAULT_MEAN_SIZE)
    values = instance_rng(config).random(N)
    exact = float(values.mean())
    backend = config.leaf_backend
    options = {"backend": config.simulator} if backend is EstimatorBackend.QUANTUM else {}

    @lru_cache(maxsize=None)
    def prepare(n: int) -> Estimator:
        return make_mean_estimator(backend, values, n, nonnegative=True, **options)

    def trial(n: int, rng: np.random.Generator) -> TrialOutcome:
        est = prepare(n)
        estimate = float(np.real(est.sample(rng)))
        return TrialOutcome(estimate, abs(estimate - exact), est.n_queries)

    exponent = {EstimatorBackend.DETERMINISTIC: 0.0}.get(backend, backend_exponent(backend, 1))
    return BenchmarkProblem("mean", exponent, prepare, trial)


@BenchmarkRegistry.register("weighted-integral")
def weighted_integral_benchmark(config: ExperimentConfig) -> BenchmarkProblem:
    """int_[0,1]^2 |y|^-1/2 f(y) dy for a smooth f."""
    shift = float(instance_rng(config).random())

    def f(y: np.ndarray) -> np.ndarray:
        return 0.5 + 0.4 * np.cos(np.pi * (y[:, 0] + 2.0 * y[:, 1] + shift))

    def g(y: np.ndarray) -> np.ndarray:
        return (y**2).sum(axis=1) ** -0.25

    origin = np.zeros((1, 2))
    problem = IntegrationProblem(
        region=Box.unit(2),
        weight=g,
        f_oracle=f,
        singular_points=origin,
        sigma=-0.5,
        lipschitz=0.4 * np.pi * np.sqrt(5.0),
    )
    lower, upper = frame_cells(Box.unit(2), REFERENCE_LEVEL)
    exact = float(
        cell_integrals(lambda y: g(y) * f(y), lower, upper, singular_points=origin, sigma=-0.5).sum()
    )
    backend = config.leaf_backend

    @lru_cache(maxsize=None)
    def prepare(n: int) -> Estimator:
        return weighted_integral_estimator(problem, n, backend=backend, sim_backend=config.simulator)

    def trial(n: int, rng: np.random.Generator) -> TrialOutcome:
        est = prepare(n)
        estimate = float(np.real(est.sample(rng)))
        return TrialOutcome(estimate, abs(estimate - exact), est.n_queries)

    return BenchmarkProblem("weighted-integral", backend_exponent(backend, 2), prepare, trial)


@BenchmarkRegistry.register("singular-operator")
def singular_operator_benchmark(config: ExperimentConfig) -> BenchmarkProblem:
    """T_k f for k = |x - y|^sigma and a continuous f, multilevel estimator only."""
    backend = config.leaf_backend

    def f(y: np.ndarray) -> np.ndarray:
        return 0.5 * np.cos(np.pi * y.sum(axis=1))

    def build(kernel, n):
        est, _ = multilevel_estimator(kernel, f, n, backend=backend, sim_backend=config.simulator)
        return est

    plan = select_budgets(
        config.budgets[-1],
        config.s,
        config.sigma,
        config.d,
        config.d1,
        leaf_exponent=backend_exponent(backend, config.d),
        boosted=is_boosted(backend),
    )
    return _operator_problem("singular-operator", config, build, f, plan.predicted_exponent)


@BenchmarkRegistry.register("smooth-operator")
def smooth_operator_benchmark(config: ExperimentConfig) -> BenchmarkProblem:
    """T_k f for a C^r input, interpolant plus multilevel residual."""
    backend = config.leaf_backend

    def f(y: np.ndarray) -> np.ndarray:
        return 0.2 * np.cos(2.0 * y.sum(axis=1))

    def build(kernel, n):
        return smooth_estimator(kernel, f, config.r, n, backend=backend, sim_backend=config.simulator)

    rates = RateExponents(d=config.d, d1=config.d1, s=config.s, sigma=config.sigma, r=config.r)
    return _operator_problem("smooth-operator", config, build, f, smooth_setting_exponent(rates, backend))


def _poisson_benchmark(name: str, config: ExperimentConfig) -> BenchmarkProblem:
    problem = get_problem(name)
    size = DEFAULT_CIRCLE_RADIUS if config.size is None else config.size
    manifold = make_manifold(config.manifold, problem.d, size)
    rhs = make_rhs(config.rhs, problem.d, config.r)
    kernel = green_kernel(problem, manifold, config.s)
    exact = rhs.exact(manifold.probe_points)
    oracle = rhs.scaled()
    backend = config.leaf_backend

    @lru_cache(maxsize=None)
    def prepare(n: int) -> Estimator:
        return smooth_estimator(kernel, oracle, config.r, n, backend=backend, sim_backend=config.simulator)

    def trial(n: int, rng: np.random.Generator) -> TrialOutcome:
        est = prepare(n)
        values = rhs.scale * est.sample(rng)(manifold.probe_params)
        return TrialOutcome(values, float(np.max(np.abs(values - exact))), est.n_queries)

    rates = RateExponents(d=problem.d, d1=manifold.d1, s=config.s, sigma=problem.sigma, r=config.r)
    return BenchmarkProblem(name, smooth_setting_exponent(rates, backend), prepare, trial)


@BenchmarkRegistry.register("poisson-disk")
def poisson_disk_benchmark(config: ExperimentConfig) -> BenchmarkProblem:
    return _poisson_benchmark("poisson-disk", config)


@BenchmarkRegistry.register("poisson-ball")
def poisson_ball_benchmark(config: ExperimentConfig) -> BenchmarkProblem:
    return _poisson_benchmark("poisson-ball", config)
