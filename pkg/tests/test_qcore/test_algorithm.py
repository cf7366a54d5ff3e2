import numpy as np
import pytest

from src.core.config import SimulatorConfig
from src.core.data_types import Backend
from src.core.exceptions import (
    CapacityError,
    ContractViolationError,
    InputError,
    UnsupportedBackendError,
)
from src.qcore.algorithm import (
    AlgorithmRunner,
    AlgorithmSpec,
    Stage,
    algorithm_distribution,
    amplitude_estimation_algorithm,
    exact_distribution,
    run_algorithm,
)
from src.qcore.query import FixedPointQuantizer, QuerySpec

# ------------------- FIXTURES ------------------- #


@pytest.fixture
def read_query():
    """Create a one-bit read-out query over two indices."""
    return QuerySpec(
        m=2,
        m_prime=1,
        m_dprime=1,
        Z={0, 1},
        tau={0: "x0", 1: "x1"},
        beta=FixedPointQuantizer(bits=1),
    )


@pytest.fixture
def classical_evaluation(read_query):
    """Create the two-stage algorithm that queries then measures each index."""
    identity = np.eye(4)
    stages = [
        Stage(unitaries=[identity, identity], query=read_query, start=0b00),
        Stage(unitaries=[identity, identity], query=read_query, start=0b10),
    ]
    return AlgorithmSpec(
        stages=stages, output_map=lambda outcomes: 2 * (outcomes[0] & 1) + (outcomes[1] & 1)
    )


def _law_by_value(dist):
    law = {}
    for value, prob in zip(dist.support, dist.probs):
        key = round(float(value), 9)
        law[key] = law.get(key, 0.0) + float(prob)
    return law


# ------------------- TESTS ------------------- #


class TestStage:
    """Test stage validation and accounting."""

    def test_query_required_between_unitaries(self):
        with pytest.raises(InputError, match="query"):
            Stage(unitaries=[np.eye(2), np.eye(2)])

    def test_shapes_must_agree(self):
        with pytest.raises(ContractViolationError):
            Stage(unitaries=[np.eye(2), np.eye(4)])

    def test_query_count(self, read_query):
        stage = Stage(unitaries=[np.eye(4)] * 3, query=read_query)
        assert stage.n_queries == 2

    def test_additive_query_count(self, classical_evaluation):
        assert classical_evaluation.n_queries == 2


class TestRunAlgorithm:
    """Test sampling on both backends."""

    def test_no_queries_outputs_start_state(self):
        alg = AlgorithmSpec(
            stages=[Stage(unitaries=[np.eye(4)], start=2)],
            output_map=lambda outcomes: 10 * outcomes[0],
        )
        dist = exact_distribution(alg, {})
        assert dist.probability_of(20) == pytest.approx(1.0)
        assert run_algorithm(alg, {}, seed=3) == 20

    def test_classical_evaluation_is_certain(self, classical_evaluation):
        oracle = {"x0": 1.0, "x1": 0.0}
        dist = exact_distribution(classical_evaluation, oracle)
        assert len(dist) == 1
        assert dist.probability_of(2) == pytest.approx(1.0)
        assert run_algorithm(classical_evaluation, oracle, seed=11) == 2

    def test_seed_determinism(self):
        alg = amplitude_estimation_algorithm(0.3, 3)
        first = [run_algorithm(alg, None, Backend.STATEVECTOR, seed=s) for s in range(20)]
        second = [run_algorithm(alg, None, Backend.STATEVECTOR, seed=s) for s in range(20)]
        assert first == second

    def test_three_qubit_circuit_at_one_half(self):
        alg = amplitude_estimation_algorithm(0.5, 2)
        assert alg.qubits == 3
        samples = [run_algorithm(alg, None, "statevector", seed=s) for s in range(200)]
        np.testing.assert_allclose(samples, 0.5)

    def test_sampled_law_matches_exact(self, rng):
        alg = amplitude_estimation_algorithm(0.3, 2)
        exact = _law_by_value(exact_distribution(alg, None))
        samples = np.array([run_algorithm(alg, None, "statevector", seed=rng) for _ in range(4000)])
        empirical = {value: float(np.mean(np.isclose(samples, value))) for value in exact}
        assert 0.5 * sum(abs(empirical[v] - exact[v]) for v in exact) < 0.03

    def test_analytic_backend_samples_registered_law(self):
        alg = amplitude_estimation_algorithm(0.5, 2)
        assert run_algorithm(alg, None, Backend.ANALYTIC, seed=5) == pytest.approx(0.5)

    def test_capacity_error(self):
        alg = amplitude_estimation_algorithm(0.3, 2)
        with pytest.raises(CapacityError):
            run_algorithm(alg, None, seed=0, config=SimulatorConfig(max_qubits=2))

    def test_missing_analytic_law(self, classical_evaluation):
        with pytest.raises(UnsupportedBackendError):
            run_algorithm(classical_evaluation, {"x0": 0.0, "x1": 0.0}, Backend.ANALYTIC)

    def test_non_unitary_rejected(self):
        alg = AlgorithmSpec(
            stages=[Stage(unitaries=[np.array([[1.0, 1.0], [0.0, 1.0]])])],
            output_map=lambda outcomes: outcomes[0],
        )
        with pytest.raises(ContractViolationError, match="not unitary"):
            exact_distribution(alg, {})


class TestAmplitudeEstimationAlgorithm:
    """Test the registered amplitude estimation algorithm."""

    def test_registered(self):
        assert "amplitude_estimation" in AlgorithmRunner.registered_laws()

    def test_query_charge(self):
        assert amplitude_estimation_algorithm(0.2, 4).n_queries == 16

    @pytest.mark.parametrize("a", [0.0, 0.1, 0.3, 0.5, 0.9, 1.0])
    @pytest.mark.parametrize("t", [1, 2, 3, 4, 5])
    def test_backends_agree(self, a, t):
        alg = amplitude_estimation_algorithm(a, t)
        analytic = _law_by_value(algorithm_distribution(alg, None, Backend.ANALYTIC))
        simulated = _law_by_value(algorithm_distribution(alg, None, Backend.STATEVECTOR))
        keys = set(analytic) | set(simulated)
        tv = 0.5 * sum(abs(analytic.get(k, 0.0) - simulated.get(k, 0.0)) for k in keys)
        assert tv <= 1e-9
