"""Amplitude estimation: closed-form outcome law, state-vector reference and sampling.

Phase estimation with t bits on the Grover operator of a state preparation with
good-state probability a = sin^2(theta_a) returns y in {0..2^t - 1} with

    p(y) = (F(y/T - theta_a/pi) + F(y/T + theta_a/pi)) / 2,
    F(delta) = sin^2(T pi delta) / (T^2 sin^2(pi delta)),   T = 2^t,

and the estimate is sin^2(pi y / T). One run costs T applications of the oracle.
"""

import logging
from math import asin, pi, sqrt

import numpy as np

from src.core.config import DEFAULT_SIMULATOR, SimulatorConfig
from src.core.data_types import OutputDistribution
from src.core.exceptions import InputError, InsufficientBudgetError
from src.qcore.statevector import (
    HADAMARD,
    grover_operator,
    inverse_qft_matrix,
    kron_all,
    phase_estimation_distribution,
    ry,
)

logger = logging.getLogger(__name__)

MAX_PHASE_BITS = 28
SINGULAR_SINE = 1e-12


def _check_inputs(a: float, t: int) -> None:
    if not 0.0 <= a <= 1.0:
        raise InputError("Amplitude must lie in [0, 1]", details={"a": a})
    if not 1 <= t <= MAX_PHASE_BITS:
        raise InputError(
            f"Phase bits must lie in 1..{MAX_PHASE_BITS}", details={"t": t}
        )


def _fejer(delta: np.ndarray, size: int) -> np.ndarray:
    """F(delta) with the removable singularity at integer delta filled in."""
    denominator = np.sin(pi * delta)
    small = np.abs(denominator) < SINGULAR_SINE
    safe = np.where(small, 1.0, denominator)
    values = np.sin(size * pi * delta) ** 2 / (size**2 * safe**2)
    return np.where(small, 1.0, values)


def outcome_probabilities(a: float, t: int, outcomes: np.ndarray) -> np.ndarray:
    """Unnormalised closed-form mass of selected outcomes y."""
    size = 2**t
    phase = asin(sqrt(a)) / pi
    y = np.asarray(outcomes, dtype=float) / size
    return 0.5 * (_fejer(y - phase, size) + _fejer(y + phase, size))


def estimates_for(outcomes, t: int) -> np.ndarray:
    """Amplitude estimate sin^2(pi y / 2^t) of each outcome."""
    return np.sin(pi * np.asarray(outcomes, dtype=float) / 2**t) ** 2


def ae_outcome_distribution(a: float, t: int) -> OutputDistribution:
    """Exact law of the amplitude estimate for amplitude a and t phase bits.

    Examples:
        >>> dist = ae_outcome_distribution(0.5, 2)
        >>> float(dist.probability_of(0.5))
        1.0
    """
    _check_inputs(a, t)
    outcomes = np.arange(2**t)
    probs = outcome_probabilities(a, t, outcomes)
    return OutputDistribution(
        support=estimates_for(outcomes, t), probs=probs / probs.sum(), outcomes=outcomes
    )


def _windowed_law(a: float, t: int, half_width: int):
    size = 2**t
    phase = asin(sqrt(a)) / pi
    centres = {int(round(size * phase)) % size, int(round(size * (1.0 - phase))) % size}
    offsets = np.arange(-half_width, half_width + 1)
    outcomes = np.unique(np.concatenate([(c + offsets) % size for c in centres]))
    probs = outcome_probabilities(a, t, outcomes)
    return outcomes, probs


def sample_ae_outcomes(
    a: float,
    t: int,
    rng: np.random.Generator,
    size: int = 1,
    config: SimulatorConfig = DEFAULT_SIMULATOR,
) -> np.ndarray:
    """Draw phase-register outcomes y from the closed-form law.

    Up to config.window_threshold_bits phase bits the full law is sampled. Beyond
    that only the outcomes within config.window_half_width of the two peaks are
    kept; the discarded mass is logged.
    """
    _check_inputs(a, t)
    if t <= config.window_threshold_bits:
        outcomes = np.arange(2**t)
        probs = outcome_probabilities(a, t, outcomes)
    else:
        outcomes, probs = _windowed_law(a, t, config.window_half_width)
        logger.debug("AE window with %s outcomes drops mass %.3e", outcomes.size, 1.0 - probs.sum())
    return outcomes[rng.choice(outcomes.size, size=size, p=probs / probs.sum())]


def sample_ae_estimates(
    a: float, t: int, rng: np.random.Generator, size: int = 1
) -> np.ndarray:
    """Draw amplitude estimates sin^2(pi y / 2^t)."""
    return estimates_for(sample_ae_outcomes(a, t, rng, size), t)


def bernoulli_preparation(a: float) -> np.ndarray:
    """One-qubit state preparation R_y(2 theta_a) with good state |1>."""
    return ry(2.0 * asin(sqrt(a)))


def statevector_ae_distribution(
    a: float, t: int, config: SimulatorConfig = DEFAULT_SIMULATOR
) -> OutputDistribution:
    """Law of the estimate from the simulated phase-estimation circuit."""
    _check_inputs(a, t)
    prep = bernoulli_preparation(a)
    grover = grover_operator(prep, np.array([False, True]))
    probs = phase_estimation_distribution(grover, prep[:, 0], t, config)
    outcomes = np.arange(2**t)
    return OutputDistribution(support=estimates_for(outcomes, t), probs=probs, outcomes=outcomes)


def amplitude_estimation_circuit(a: float, t: int) -> np.ndarray:
    """Full (t + 1)-qubit unitary of amplitude estimation on a Bernoulli preparation.

    Phase qubits are the most significant; the work qubit is last. The unitary is
    (IQFT x I) . sum_j |j><j| x G^j . (H^t x A).
    """
    _check_inputs(a, t)
    size = 2**t
    prep = bernoulli_preparation(a)
    grover = grover_operator(prep, np.array([False, True]))
    controlled = np.zeros((2 * size, 2 * size), dtype=complex)
    power = np.eye(2, dtype=complex)
    for j in range(size):
        controlled[2 * j : 2 * j + 2, 2 * j : 2 * j + 2] = power
        power = grover @ power
    hadamards = kron_all(*([HADAMARD] * t))
    return kron_all(inverse_qft_matrix(t), np.eye(2)) @ controlled @ kron_all(hadamards, prep)


def ae_query_cost(t: int) -> int:
    """Oracle applications charged for one amplitude estimation run."""
    return 2**t


def phase_bits_for_budget(n: int) -> int:
    """Largest t with 2^t <= n.

    Raises:
        InsufficientBudgetError: If n < 2
    """
    if n < 2:
        raise InsufficientBudgetError(
            "Amplitude estimation needs a budget of at least 2", details={"n": n}
        )
    return min(int(n).bit_length() - 1, MAX_PHASE_BITS)
