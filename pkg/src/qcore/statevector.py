"""Dense state-vector kit: gates, Grover operators and phase estimation.

Qubit 0 is the most significant qubit of a flattened state. This backend exists to
validate the closed-form laws, so it favours clarity over speed and refuses to
allocate more than the configured number of qubits.
"""

import logging
from math import cos, sin, sqrt
from typing import Callable, Union

import numpy as np

from src.core.config import DEFAULT_SIMULATOR, SimulatorConfig
from src.core.exceptions import CapacityError, ContractViolationError

logger = logging.getLogger(__name__)

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / sqrt(2)


def ry(angle: float) -> np.ndarray:
    """Rotation about the y axis."""
    return np.array(
        [[cos(angle / 2), -sin(angle / 2)], [sin(angle / 2), cos(angle / 2)]],
        dtype=complex,
    )


def check_capacity(n_qubits: int, config: SimulatorConfig = DEFAULT_SIMULATOR) -> None:
    """Raise if a state of n_qubits would exceed the qubit cap."""
    if n_qubits > config.max_qubits:
        raise CapacityError(
            f"State of {n_qubits} qubits exceeds the cap of {config.max_qubits}",
            details={"qubits": n_qubits, "cap": config.max_qubits},
        )


def apply_single_qubit(state: np.ndarray, matrix: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """Apply a 2x2 gate to one qubit of an n-qubit state."""
    tensor = np.moveaxis(state.reshape([2] * n), qubit, -1)
    tensor = np.tensordot(tensor, matrix, axes=([-1], [1]))
    return np.moveaxis(tensor, -1, qubit).reshape(-1)


def kron_all(*matrices: np.ndarray) -> np.ndarray:
    """Kronecker product in register order (first factor most significant)."""
    result = np.ones((1, 1), dtype=complex)
    for matrix in matrices:
        result = np.kron(result, matrix)
    return result


def is_unitary(matrix: np.ndarray, tol: float = DEFAULT_SIMULATOR.unitary_tolerance) -> bool:
    """True when U^dagger U is the identity within tol."""
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        return False
    return bool(np.allclose(matrix.conj().T @ matrix, np.eye(matrix.shape[0]), atol=tol))


def measurement_probabilities(state: np.ndarray) -> np.ndarray:
    """Computational-basis outcome probabilities."""
    probs = np.abs(np.asarray(state)) ** 2
    total = probs.sum()
    if abs(total - 1.0) > 1e-9:
        raise ContractViolationError("State is not normalised", details={"norm2": float(total)})
    return probs / total


def grover_operator(a_matrix: np.ndarray, good: np.ndarray) -> np.ndarray:
    """The amplitude amplification operator -A S_0 A^dagger S_chi.

    Args:
        a_matrix: State preparation unitary A
        good: Boolean mask of good basis states
    """
    dim = a_matrix.shape[0]
    s_zero = np.eye(dim, dtype=complex)
    s_zero[0, 0] = -1.0
    s_chi = np.diag(np.where(np.asarray(good), -1.0, 1.0)).astype(complex)
    return -a_matrix @ s_zero @ a_matrix.conj().T @ s_chi


def phase_estimation_distribution(
    unitary: Union[np.ndarray, Callable[[np.ndarray], np.ndarray]],
    psi: np.ndarray,
    t: int,
    config: SimulatorConfig = DEFAULT_SIMULATOR,
) -> np.ndarray:
    """Outcome law of t-bit phase estimation of unitary on |psi>.

    Builds the joint state sum_j |j> U^j |psi> / sqrt(2^t), applies the inverse
    quantum Fourier transform to the phase register and measures it. unitary is a
    matrix or a function applying the operator to a state.
    """
    apply = unitary if callable(unitary) else (lambda state: unitary @ state)
    dim = np.asarray(psi).shape[0]
    work_qubits = int(np.ceil(np.log2(dim)))
    check_capacity(t + work_qubits, config)
    size = 2**t
    joint = np.empty((size, dim), dtype=complex)
    joint[0] = psi
    for j in range(1, size):
        joint[j] = apply(joint[j - 1])
    joint /= sqrt(size)
    # numpy's forward transform carries the e^{-2 pi i j y / T} sign of the inverse QFT
    amplitudes = np.fft.fft(joint, axis=0, norm="ortho")
    probs = (np.abs(amplitudes) ** 2).sum(axis=1)
    logger.debug("Phase estimation over %s phase qubits and %s work qubits", t, work_qubits)
    return probs / probs.sum()


def inverse_qft_matrix(t: int) -> np.ndarray:
    """Dense inverse QFT on t qubits."""
    size = 2**t
    j, y = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")
    return np.exp(-2j * np.pi * j * y / size).T / sqrt(size)
