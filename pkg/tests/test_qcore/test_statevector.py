from math import pi, sqrt

import numpy as np
import pytest

from src.core.config import SimulatorConfig
from src.core.exceptions import CapacityError, ContractViolationError
from src.qcore.statevector import (
    HADAMARD,
    apply_single_qubit,
    check_capacity,
    grover_operator,
    inverse_qft_matrix,
    is_unitary,
    kron_all,
    measurement_probabilities,
    phase_estimation_distribution,
    ry,
)


def test_gates_are_unitary():
    assert is_unitary(HADAMARD)
    assert is_unitary(ry(0.7))
    assert is_unitary(inverse_qft_matrix(3))


def test_non_square_is_not_unitary():
    assert not is_unitary(np.ones((2, 3)))
    assert not is_unitary(2 * np.eye(2))


def test_single_qubit_matches_kronecker():
    state = np.zeros(8, dtype=complex)
    state[0] = 1.0
    result = apply_single_qubit(state, HADAMARD, 1, 3)
    expected = kron_all(np.eye(2), HADAMARD, np.eye(2)) @ state
    np.testing.assert_allclose(result, expected)


def test_ry_rotates_into_superposition():
    state = ry(pi / 2) @ np.array([1.0, 0.0], dtype=complex)
    np.testing.assert_allclose(np.abs(state) ** 2, [0.5, 0.5])


def test_measurement_probabilities_rejects_unnormalised():
    with pytest.raises(ContractViolationError):
        measurement_probabilities(np.array([1.0, 1.0]))


def test_grover_operator_rotates_by_twice_theta():
    theta = 0.3
    prep = ry(2 * theta)
    grover = grover_operator(prep, np.array([False, True]))
    assert is_unitary(grover)
    phases = np.sort(np.abs(np.angle(np.linalg.eigvals(grover))))
    np.testing.assert_allclose(phases, [2 * theta, 2 * theta])


def test_phase_estimation_exact_phase():
    unitary = np.diag([1.0, np.exp(2j * pi * 3 / 8)])
    probs = phase_estimation_distribution(unitary, np.array([0.0, 1.0], dtype=complex), 3)
    expected = np.zeros(8)
    expected[3] = 1.0
    np.testing.assert_allclose(probs, expected, atol=1e-12)


def test_phase_estimation_mixture_of_eigenvectors():
    unitary = np.diag([1.0, -1.0]).astype(complex)
    psi = np.array([1.0, 1.0], dtype=complex) / sqrt(2)
    probs = phase_estimation_distribution(unitary, psi, 2)
    np.testing.assert_allclose(probs, [0.5, 0.0, 0.5, 0.0], atol=1e-12)


def test_inverse_qft_undoes_fourier_transform():
    forward = inverse_qft_matrix(3).conj().T
    np.testing.assert_allclose(inverse_qft_matrix(3) @ forward, np.eye(8), atol=1e-12)


class TestCapacity:
    """Test the qubit cap."""

    def test_within_cap(self):
        check_capacity(24)

    def test_over_cap(self):
        with pytest.raises(CapacityError, match="exceeds"):
            check_capacity(25)

    def test_phase_estimation_respects_cap(self):
        config = SimulatorConfig(max_qubits=2)
        with pytest.raises(CapacityError):
            phase_estimation_distribution(np.eye(2), np.array([1.0, 0.0]), 2, config)
