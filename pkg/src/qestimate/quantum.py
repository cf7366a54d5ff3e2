"""Quantum mean estimation by amplitude estimation.

The sequence is split into parts with values in [0, 1] (positive and negative
parts of the real and imaginary components). Each part is estimated by one
amplitude estimation run with budget n // parts, and the parts are recombined
with their signs.
"""

import logging
from math import asin, ceil, log2, sqrt
from typing import List, Tuple, Union

import numpy as np

from src.core.config import DEFAULT_SIMULATOR, SimulatorConfig
from src.core.data_types import Backend, EstimatorBackend, OutputDistribution
from src.core.exceptions import UnsupportedBackendError
from src.core.seeds import SeedLike
from src.qcore.amplitude import (
    ae_outcome_distribution,
    ae_query_cost,
    estimates_for,
    phase_bits_for_budget,
    sample_ae_estimates,
)
from src.qcore.combinators import boost_median, compose_linear
from src.qcore.estimator import ConstantEstimator, DistributionEstimator, Estimator
from src.qcore.query import FixedPointQuantizer, QuerySpec, query_permutation
from src.qcore.statevector import (
    HADAMARD,
    apply_single_qubit,
    check_capacity,
    phase_estimation_distribution,
    ry,
)
from src.qestimate.base import MeanEstimator, SequenceOracle, evaluate_sequence

logger = logging.getLogger(__name__)

MIN_PART_BUDGET = 2


def split_parts(values: np.ndarray, nonnegative: bool = False) -> List[Tuple[complex, np.ndarray]]:
    """Signed parts with values in [0, 1] that sum back to values."""
    if nonnegative:
        return [(1, np.clip(values.real, 0.0, 1.0))]
    parts = [
        (1, np.clip(values.real, 0.0, None)),
        (-1, np.clip(-values.real, 0.0, None)),
    ]
    if np.iscomplexobj(values):
        parts += [
            (1j, np.clip(values.imag, 0.0, None)),
            (-1j, np.clip(-values.imag, 0.0, None)),
        ]
    return parts


class AmplitudeEstimationEstimator(Estimator):
    """One amplitude estimation run on the closed-form law."""

    def __init__(self, a: float, t: int, scale: float = 1.0, config: SimulatorConfig = DEFAULT_SIMULATOR):
        self.a = float(np.clip(a, 0.0, 1.0))
        self.t = t
        self.scale = scale
        self.config = config

    @property
    def n_queries(self) -> int:
        return ae_query_cost(self.t)

    def sample(self, rng: np.random.Generator) -> float:
        return float(self.sample_many(rng, 1)[0])

    def sample_many(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return self.scale * sample_ae_estimates(self.a, self.t, rng, size)

    def distribution(self) -> OutputDistribution:
        if self.t > self.config.window_threshold_bits:
            return super().distribution()
        law = ae_outcome_distribution(self.a, self.t)
        return OutputDistribution(self.scale * law.support, law.probs, law.outcomes)


def _statevector_part(
    part: np.ndarray, multiplicities: np.ndarray, t: int, config: SimulatorConfig
) -> Estimator:
    """Amplitude estimation of one part on simulated registers.

    Index register of ceil(log2 M) qubits, a value register, one ancilla. The
    preparation is A = R Q_f (H^b x I); indices M..2^b-1 lie outside Z.
    """
    if not np.allclose(multiplicities, np.round(multiplicities)):
        raise UnsupportedBackendError("State-vector mean estimation needs integer multiplicities")
    sequence = np.repeat(part, np.round(multiplicities).astype(np.int64))
    size = sequence.shape[0]
    bits = max(1, ceil(log2(size)))
    value_bits = config.statevector_value_bits
    width = bits + value_bits + 1
    check_capacity(t + width, config)

    beta = FixedPointQuantizer(bits=value_bits)
    query = QuerySpec(
        m=width,
        m_prime=bits,
        m_dprime=value_bits,
        Z=range(size),
        tau={j: j for j in range(size)},
        beta=beta,
    )
    perm = query_permutation(query, sequence.__getitem__)
    levels = beta.decode(np.arange(2**value_bits))
    rotations = np.stack([ry(2.0 * asin(sqrt(min(max(x, 0.0), 1.0)))) for x in levels])
    shape = (2**bits, 2**value_bits, 2)
    good = (np.arange(2**width) & 1).astype(bool)

    def hadamards(state):
        for qubit in range(bits):
            state = apply_single_qubit(state, HADAMARD, qubit, width)
        return state

    def prepare(state):
        state = hadamards(state)
        shifted = np.empty_like(state)
        shifted[perm] = state
        rotated = np.einsum("xab,ixb->ixa", rotations, shifted.reshape(shape))
        return rotated.reshape(-1)

    def unprepare(state):
        rotated = np.einsum("xba,ixb->ixa", rotations.conj(), state.reshape(shape))
        return hadamards(rotated.reshape(-1)[perm])

    def grover(state):
        state = np.where(good, -state, state)
        state = unprepare(state)
        state[0] = -state[0]
        return -prepare(state)

    start = np.zeros(2**width, dtype=complex)
    start[0] = 1.0
    probs = phase_estimation_distribution(grover, prepare(start), t, config)
    scale = 2**bits / size
    support = np.clip(scale * estimates_for(np.arange(2**t), t), 0.0, 1.0)
    logger.debug("Simulated AE part on %s qubits", t + width)
    return DistributionEstimator(OutputDistribution(support, probs), ae_query_cost(t))


@MeanEstimator.register_backend(EstimatorBackend.QUANTUM)
class QuantumMeanEstimator(MeanEstimator):
    """Mean estimator with error of order 1/n at success probability 3/4.

    Args:
        backend: Analytic closed-form laws or simulated registers
        config: Register widths and caps
    """

    def __init__(
        self,
        values: np.ndarray,
        n: int,
        weights=None,
        nonnegative: bool = False,
        backend: Union[Backend, str] = Backend.ANALYTIC,
        config: SimulatorConfig = DEFAULT_SIMULATOR,
    ):
        super().__init__(values, n, weights, nonnegative)
        self.backend = Backend(backend)
        self.config = config
        parts = split_parts(self.values, nonnegative)
        per_part = self.n // len(parts)
        subs = []
        if per_part < MIN_PART_BUDGET:
            logger.warning(
                "Budget %s leaves %s queries for each of %s parts; estimating 0",
                self.n,
                per_part,
                len(parts),
            )
        else:
            t = phase_bits_for_budget(per_part)
            for coefficient, part in parts:
                subs.append((self._part_estimator(part, t), coefficient))
        self._composite = compose_linear(subs) if subs else ConstantEstimator(0.0)

    def _part_estimator(self, part: np.ndarray, t: int) -> Estimator:
        if self.backend is Backend.STATEVECTOR:
            return _statevector_part(part, self.weights, t, self.config)
        beta = FixedPointQuantizer(bits=self.config.analytic_value_bits)
        quantized = beta.decode(beta.encode(part))
        a = float((self.weights * quantized).sum() / self.weights.sum())
        return AmplitudeEstimationEstimator(a, t, config=self.config)

    @property
    def n_queries(self) -> int:
        return self._composite.n_queries

    def sample(self, rng: np.random.Generator):
        return self._composite.sample(rng)

    def distribution(self) -> OutputDistribution:
        return self._composite.distribution()


def qmean(
    f: SequenceOracle,
    N: int,
    n: int,
    backend: Union[Backend, str] = Backend.ANALYTIC,
    seed: SeedLike = None,
    nonnegative: bool = False,
    nu: int = 1,
    config: SimulatorConfig = DEFAULT_SIMULATOR,
):
    """Estimate S_N f = (1/N) sum f(i) with at most n queries per repetition.

    Raises:
        ContractViolationError: If some |f(i)| > 1
    """
    values = evaluate_sequence(f, N)
    est: Estimator = QuantumMeanEstimator(
        values, n, nonnegative=nonnegative, backend=backend, config=config
    )
    if nu > 1:
        est = boost_median(est, nu)
    return est.estimate(seed)
