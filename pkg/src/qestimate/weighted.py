"""Weighted means S_{N,g} f through the integer weight reduction.

The weight is scaled to unit norm and split into real and imaginary parts, then
into positive and negative parts. Each nonnegative part is replicated with
h = floor(n g) and its mean is estimated on the replicated index space. The
terms are recombined with the factors

    J11 = 1, J22 = -1, J12 = J21 = i

coming from (g1 + i g2)(f1 + i f2).
"""

import logging
from typing import List, Tuple, Union

import numpy as np

from src.core.config import DEFAULT_SIMULATOR, SimulatorConfig
from src.core.data_types import Backend, EstimatorBackend
from src.core.exceptions import ZeroReductionError
from src.core.seeds import SeedLike
from src.qcore.combinators import boost_median, compose_linear
from src.qcore.estimator import ConstantEstimator, Estimator
from src.qestimate.base import WeightedSumProblem, make_mean_estimator, unit_phase
from src.qestimate.reduction import reduce_weights

logger = logging.getLogger(__name__)

Term = Tuple[complex, np.ndarray, np.ndarray]


def _components(values: np.ndarray) -> List[Tuple[complex, np.ndarray]]:
    if np.iscomplexobj(values):
        return [(1, values.real), (1j, values.imag)]
    return [(1, values.astype(float))]


def signed_terms(g: np.ndarray, f: np.ndarray) -> List[Term]:
    """(factor, nonnegative weight part, real value part) triples summing to g * f."""
    terms = []
    for g_factor, g_part in _components(g):
        for sign, weights in ((1, np.clip(g_part, 0.0, None)), (-1, np.clip(-g_part, 0.0, None))):
            if not np.any(weights > 0):
                continue
            for f_factor, f_part in _components(f):
                terms.append((sign * g_factor * f_factor, weights, f_part))
    return terms


def _simplify(values: np.ndarray) -> np.ndarray:
    if np.iscomplexobj(values) and not np.any(values.imag):
        return values.real
    return values


def _reduced_term(
    weights: np.ndarray,
    values: np.ndarray,
    budget: int,
    sim_backend: Backend,
    config: SimulatorConfig,
) -> Tuple[Estimator, float]:
    """Quantum estimate of S_M(Rf) and the factor M / (nN) taking it to S_{N, g_tilde} f."""
    reduction = reduce_weights(weights, budget)
    keep = reduction.h > 0
    leaf = make_mean_estimator(
        EstimatorBackend.QUANTUM,
        values[keep],
        budget,
        weights=reduction.h[keep],
        backend=sim_backend,
        config=config,
    )
    return leaf, reduction.scale


def weighted_mean_estimator(
    problem: WeightedSumProblem,
    n: int,
    backend: Union[EstimatorBackend, str] = EstimatorBackend.QUANTUM,
    nu: int = 1,
    sim_backend: Union[Backend, str] = Backend.ANALYTIC,
    config: SimulatorConfig = DEFAULT_SIMULATOR,
) -> Estimator:
    """Estimator of S_{N,g} f with budget n per repetition.

    Quantum leaves see the reduced sequences. Monte Carlo and deterministic
    leaves work directly on the phase of g times f with weights |g|. The exact
    backend sums every part with the unreduced weights and charges nothing.
    """
    backend = EstimatorBackend(backend)
    sim_backend = Backend(sim_backend)
    values = problem.values()
    norm = problem.l1_norm
    if norm == 0.0:
        logger.debug("Zero weight, estimate is 0")
        return ConstantEstimator(0.0)

    if backend in (EstimatorBackend.MONTE_CARLO, EstimatorBackend.DETERMINISTIC):
        leaf = make_mean_estimator(
            backend, _simplify(unit_phase(problem.g) * values), n, weights=np.abs(problem.g)
        )
        est: Estimator = compose_linear([(leaf, norm)])
        if backend is EstimatorBackend.MONTE_CARLO and nu > 1:
            est = boost_median(est, nu)
        return est

    g_hat = problem.g / norm
    terms = signed_terms(g_hat, values)
    if backend is EstimatorBackend.EXACT:
        return compose_linear(
            [(ConstantEstimator(float(np.mean(w * v))), norm * factor) for factor, w, v in terms]
        )

    per_term = n // len(terms)
    subs = []
    for factor, weights, part in terms:
        if per_term < 1:
            logger.warning("Budget %s leaves nothing for %s terms; term estimated as 0", n, len(terms))
            continue
        try:
            leaf, scale = _reduced_term(weights, part, per_term, sim_backend, config)
        except ZeroReductionError:
            logger.debug("Term with factor %s reduces to M = 0", factor)
            continue
        subs.append((leaf, norm * factor * scale))
    if not subs:
        return ConstantEstimator(0.0)
    est = compose_linear(subs)
    logger.debug("Weighted mean: %s terms, %s queries", len(subs), est.n_queries)
    if nu > 1:
        est = boost_median(est, nu)
    return est


def weighted_mean(
    problem: WeightedSumProblem,
    n: int,
    backend: Union[EstimatorBackend, str] = EstimatorBackend.QUANTUM,
    seed: SeedLike = None,
    nu: int = 1,
    sim_backend: Union[Backend, str] = Backend.ANALYTIC,
    config: SimulatorConfig = DEFAULT_SIMULATOR,
):
    """Estimate S_{N,g} f = (1/N) sum g(i) f(i).

    Examples:
        >>> problem = WeightedSumProblem(3, np.array([1.5, 0.9, 0.6]), [1, -1, 1])
        >>> round(weighted_mean(problem, 64, backend="exact"), 12)
        0.4
    """
    est = weighted_mean_estimator(problem, n, backend, nu, sim_backend, config)
    return est.estimate(seed)
