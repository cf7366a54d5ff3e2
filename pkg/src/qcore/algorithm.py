"""Quantum algorithms with intermediate measurements.

An algorithm is a sequence of stages. Stage l starts in the basis state
b_l(x_0, ..., x_{l-1}) chosen from the earlier outcomes, evolves by
U_n Q_f U_{n-1} ... U_1 Q_f U_0 and is measured in the computational basis. The
output map turns the outcome tuple into the algorithm's result.

Two backends run an algorithm:
    - statevector: dense evolution, capped by SimulatorConfig.max_qubits
    - analytic: sampling from a registered closed-form outcome law
"""

import logging
from dataclasses import dataclass, field
from math import log2
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from src.core.config import DEFAULT_SIMULATOR, SimulatorConfig
from src.core.data_types import Backend, OutputDistribution
from src.core.exceptions import (
    ContractViolationError,
    InputError,
    UnsupportedBackendError,
)
from src.core.seeds import SeedLike, make_rng
from src.qcore.amplitude import (
    ae_outcome_distribution,
    ae_query_cost,
    amplitude_estimation_circuit,
)
from src.qcore.query import Oracle, QuerySpec, apply_query_unitary
from src.qcore.statevector import check_capacity, is_unitary, measurement_probabilities

logger = logging.getLogger(__name__)

StartMap = Union[int, Callable[[Tuple[int, ...]], int]]
AnalyticLaw = Callable[["AlgorithmSpec", Oracle], OutputDistribution]


@dataclass(frozen=True)
class Stage:
    """One measured stage of an algorithm.

    Args:
        unitaries: Schedule U_0..U_n; a query Q_f sits between consecutive entries
        query: The query applied between unitaries, required when n >= 1
        start: Basis index b_l, or a map from earlier outcomes to it
        measured_qubits: Leading qubits read out, all qubits when None
        charged_queries: Query charge for primitives whose oracle is compiled into
            the unitaries; defaults to the number of Q_f applications
    """

    unitaries: Sequence[np.ndarray]
    query: Optional[QuerySpec] = None
    start: StartMap = 0
    measured_qubits: Optional[int] = None
    charged_queries: Optional[int] = None

    def __post_init__(self):
        if not self.unitaries:
            raise InputError("A stage needs at least the unitary U_0")
        dims = {np.asarray(u).shape for u in self.unitaries}
        if len(dims) != 1:
            raise ContractViolationError("Stage unitaries differ in shape", details={"shapes": dims})
        if len(self.unitaries) > 1 and self.query is None:
            raise InputError("A stage with several unitaries needs a query")
        if self.query is not None and self.query.dimension != self.dimension:
            raise ContractViolationError(
                "Query and unitaries act on different spaces",
                details={"query": self.query.dimension, "unitary": self.dimension},
            )

    @property
    def dimension(self) -> int:
        return np.asarray(self.unitaries[0]).shape[0]

    @property
    def qubits(self) -> int:
        return int(round(log2(self.dimension)))

    @property
    def n_queries(self) -> int:
        if self.charged_queries is not None:
            return self.charged_queries
        return len(self.unitaries) - 1

    def start_index(self, previous: Tuple[int, ...]) -> int:
        if callable(self.start):
            return int(self.start(previous))
        return int(self.start)

    def outcome_of(self, basis_index: np.ndarray) -> np.ndarray:
        """Measured register value of each basis index."""
        if self.measured_qubits is None:
            return basis_index
        return basis_index >> (self.qubits - self.measured_qubits)


@dataclass(frozen=True)
class AlgorithmSpec:
    """A quantum algorithm with measurements and an output map.

    Args:
        stages: Measured stages in execution order
        output_map: Map from the tuple of stage outcomes to the output value
        analytic_law: Name of a registered closed-form outcome law, if any
        law_params: Parameters passed to the analytic law
    """

    stages: Sequence[Stage]
    output_map: Callable[[Tuple[int, ...]], Any]
    analytic_law: Optional[str] = None
    law_params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.stages:
            raise InputError("An algorithm needs at least one stage")

    @property
    def n_queries(self) -> int:
        """Total query count n_q, the sum over stages."""
        return sum(stage.n_queries for stage in self.stages)

    @property
    def qubits(self) -> int:
        return max(stage.qubits for stage in self.stages)


class AlgorithmRunner:
    """Registry of closed-form outcome laws for the analytic backend."""

    _laws: Dict[str, AnalyticLaw] = {}

    @classmethod
    def register_law(cls, name: str):
        """Register a closed-form outcome law under a name.

        Args:
            name: Value of AlgorithmSpec.analytic_law that selects the law
        """

        def wrapper(law: AnalyticLaw) -> AnalyticLaw:
            cls._laws[name] = law
            return law

        return wrapper

    @classmethod
    def get_law(cls, alg: AlgorithmSpec) -> AnalyticLaw:
        if alg.analytic_law is None or alg.analytic_law not in cls._laws:
            raise UnsupportedBackendError(
                "No analytic outcome law registered for this algorithm",
                details={"law": alg.analytic_law},
            )
        return cls._laws[alg.analytic_law]

    @classmethod
    def registered_laws(cls) -> List[str]:
        return sorted(cls._laws)


def validate_for_statevector(
    alg: AlgorithmSpec, config: SimulatorConfig = DEFAULT_SIMULATOR
) -> None:
    """Check the qubit cap and the unitarity of every scheduled matrix."""
    check_capacity(alg.qubits, config)
    for number, stage in enumerate(alg.stages):
        for j, unitary in enumerate(stage.unitaries):
            if not is_unitary(unitary, config.unitary_tolerance):
                raise ContractViolationError(
                    f"U_{j} of stage {number} is not unitary",
                    details={"stage": number, "index": j},
                )


def _stage_probabilities(stage: Stage, f: Oracle, previous: Tuple[int, ...]) -> np.ndarray:
    """Outcome law of one stage given the earlier outcomes."""
    state = np.zeros(stage.dimension, dtype=complex)
    state[stage.start_index(previous)] = 1.0
    state = np.asarray(stage.unitaries[0]) @ state
    for unitary in stage.unitaries[1:]:
        state = np.asarray(unitary) @ apply_query_unitary(stage.query, f, state)
    probs = measurement_probabilities(state)
    if stage.measured_qubits is None:
        return probs
    marginal = np.zeros(2**stage.measured_qubits)
    np.add.at(marginal, stage.outcome_of(np.arange(stage.dimension)), probs)
    return marginal


def exact_distribution(
    alg: AlgorithmSpec, f: Oracle, config: SimulatorConfig = DEFAULT_SIMULATOR
) -> OutputDistribution:
    """Enumerate every measurement branch of the algorithm.

    Returns one support entry per outcome tuple with nonzero probability.
    """
    validate_for_statevector(alg, config)
    branches: List[Tuple[Tuple[int, ...], float]] = [((), 1.0)]
    for stage in alg.stages:
        extended = []
        for previous, weight in branches:
            probs = _stage_probabilities(stage, f, previous)
            for outcome in np.flatnonzero(probs > 0.0):
                extended.append((previous + (int(outcome),), weight * float(probs[outcome])))
        branches = extended
    support = np.array([alg.output_map(outcomes) for outcomes, _ in branches])
    probs = np.array([weight for _, weight in branches])
    logger.debug("Enumerated %s measurement branches", len(branches))
    return OutputDistribution(support=support, probs=probs / probs.sum())


def algorithm_distribution(
    alg: AlgorithmSpec,
    f: Oracle,
    backend: Union[Backend, str] = Backend.STATEVECTOR,
    config: SimulatorConfig = DEFAULT_SIMULATOR,
) -> OutputDistribution:
    """Output law p_{A,f} on the chosen backend."""
    if Backend(backend) is Backend.ANALYTIC:
        return AlgorithmRunner.get_law(alg)(alg, f)
    return exact_distribution(alg, f, config)


def run_algorithm(
    alg: AlgorithmSpec,
    f: Oracle,
    backend: Union[Backend, str] = Backend.STATEVECTOR,
    seed: SeedLike = None,
    config: SimulatorConfig = DEFAULT_SIMULATOR,
) -> Any:
    """Sample one output of the algorithm.

    The state-vector backend measures stage by stage; the analytic backend samples
    the registered law. Equal seeds give equal outputs.

    Raises:
        CapacityError: If the state-vector backend would exceed the qubit cap
        UnsupportedBackendError: If the analytic backend has no law for alg
    """
    rng = make_rng(seed)
    if Backend(backend) is Backend.ANALYTIC:
        return AlgorithmRunner.get_law(alg)(alg, f).sample(rng)
    validate_for_statevector(alg, config)
    outcomes: Tuple[int, ...] = ()
    for stage in alg.stages:
        probs = _stage_probabilities(stage, f, outcomes)
        outcomes += (int(rng.choice(probs.size, p=probs / probs.sum())),)
    return alg.output_map(outcomes)


@AlgorithmRunner.register_law("amplitude_estimation")
def _amplitude_estimation_law(alg: AlgorithmSpec, f: Oracle) -> OutputDistribution:
    return ae_outcome_distribution(alg.law_params["a"], alg.law_params["t"])


def amplitude_estimation_algorithm(a: float, t: int) -> AlgorithmSpec:
    """Amplitude estimation on a Bernoulli preparation as a one-stage algorithm.

    The preparation plays the oracle, so the stage is charged 2^t queries.
    """
    stage = Stage(
        unitaries=[amplitude_estimation_circuit(a, t)],
        measured_qubits=t,
        charged_queries=ae_query_cost(t),
    )
    size = 2**t
    return AlgorithmSpec(
        stages=[stage],
        output_map=lambda outcomes: float(np.sin(np.pi * outcomes[0] / size) ** 2),
        analytic_law="amplitude_estimation",
        law_params={"a": a, "t": t},
    )
