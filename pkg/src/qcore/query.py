"""Quantum queries Q = (m, m', m'', Z, tau, beta) and their action on basis states.

A query acts on |i>|x>|y> (index register of m' qubits, value register of m''
qubits, m - m' - m'' work qubits) by adding beta(f(tau(i))) modulo 2^m'' to x
when i lies in Z, and by the identity otherwise. The index register is the most
significant one in the flattened state.
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable, FrozenSet, Hashable, Mapping, Union

import numpy as np

from src.core.exceptions import (
    ContractViolationError,
    InputError,
    OracleBoundError,
    UndefinedFunctionalError,
)

logger = logging.getLogger(__name__)

Oracle = Union[Mapping[Hashable, Any], Callable[[Hashable], Any]]

NORM_TOLERANCE = 1e-10


@dataclass(frozen=True)
class FixedPointQuantizer:
    """Fixed-point encoding of reals in [lower, upper] with a given number of bits.

    Args:
        bits: Register width; codes run over 0..2^bits - 1
        lower: Value encoded by code 0
        upper: Value encoded by the largest code

    Examples:
        >>> beta = FixedPointQuantizer(bits=2)
        >>> int(beta.encode(1.0))
        3
        >>> float(beta.decode(beta.encode(1.0 / 3.0)))
        0.3333333333333333
    """

    bits: int
    lower: float = 0.0
    upper: float = 1.0

    def __post_init__(self):
        if self.bits < 1 or self.bits > 62:
            raise InputError("Quantizer needs 1..62 bits", details={"bits": self.bits})
        if not self.upper > self.lower:
            raise InputError(
                "Quantizer range must be nonempty",
                details={"lower": self.lower, "upper": self.upper},
            )

    @property
    def levels(self) -> int:
        """Largest code value."""
        return 2**self.bits - 1

    @property
    def resolution(self) -> float:
        """Spacing between consecutive decoded values."""
        return (self.upper - self.lower) / self.levels

    def encode(self, values):
        """Map values in [lower, upper] to integer codes."""
        arr = np.asarray(values, dtype=float)
        span = self.upper - self.lower
        slack = 1e-12 * max(1.0, abs(span))
        if np.any(arr < self.lower - slack) or np.any(arr > self.upper + slack):
            raise OracleBoundError(
                "Oracle value outside the quantizer range",
                details={"lower": self.lower, "upper": self.upper},
            )
        scaled = (np.clip(arr, self.lower, self.upper) - self.lower) / span
        return np.rint(scaled * self.levels).astype(np.int64)

    def decode(self, codes):
        """Map integer codes back to values."""
        return self.lower + np.asarray(codes, dtype=float) * (self.upper - self.lower) / self.levels

    def __call__(self, value) -> int:
        return int(self.encode(value))


@dataclass(frozen=True)
class QuerySpec:
    """A query tuple of the query model.

    Args:
        m: Total qubit count
        m_prime: Index register bits
        m_dprime: Value register bits
        Z: Indices on which the query acts
        tau: Information functional identifier for every index in Z
        beta: Map from oracle values to {0..2^m'' - 1}
    """

    m: int
    m_prime: int
    m_dprime: int
    Z: FrozenSet[int]
    tau: Mapping[int, Hashable]
    beta: Callable[[Any], int]

    def __post_init__(self):
        object.__setattr__(self, "Z", frozenset(self.Z))
        if self.m_prime < 0 or self.m_dprime < 1 or self.m_prime + self.m_dprime > self.m:
            raise InputError(
                "Query registers must satisfy m' + m'' <= m",
                details={"m": self.m, "m_prime": self.m_prime, "m_dprime": self.m_dprime},
            )
        if not self.Z:
            raise InputError("Query index set Z must be nonempty")
        if min(self.Z) < 0 or max(self.Z) >= 2**self.m_prime:
            raise InputError(
                "Query index set Z must lie in the index register range",
                details={"m_prime": self.m_prime},
            )
        missing = [i for i in self.Z if i not in self.tau]
        if missing:
            raise InputError(
                "tau must be defined on all of Z", details={"missing": sorted(missing)[:10]}
            )
        bits = getattr(self.beta, "bits", None)
        if bits is not None and bits > self.m_dprime:
            raise InputError(
                "beta range exceeds the value register",
                details={"beta_bits": bits, "m_dprime": self.m_dprime},
            )

    @property
    def dimension(self) -> int:
        """State-vector dimension 2^m."""
        return 2**self.m

    @property
    def shape(self):
        """Register shape (index, value, work) of the flattened state."""
        return (2**self.m_prime, 2**self.m_dprime, 2 ** (self.m - self.m_prime - self.m_dprime))


def evaluate_oracle(f: Oracle, functional: Hashable) -> Any:
    """Evaluate one information functional, translating lookup failures."""
    try:
        if isinstance(f, Mapping):
            return f[functional]
        return f(functional)
    except (KeyError, IndexError) as e:
        raise UndefinedFunctionalError(
            f"Oracle has no functional {functional!r}",
            details={"functional": functional},
        ) from e


def query_offsets(query: QuerySpec, f: Oracle) -> np.ndarray:
    """Value-register offset beta(f(tau(i))) for every index, 0 outside Z."""
    offsets = np.zeros(query.shape[0], dtype=np.int64)
    modulus = 2**query.m_dprime
    for i in query.Z:
        offsets[i] = int(query.beta(evaluate_oracle(f, query.tau[i]))) % modulus
    return offsets


def query_permutation(query: QuerySpec, f: Oracle) -> np.ndarray:
    """Target basis index of every basis state under Q_f."""
    shape = query.shape
    offsets = query_offsets(query, f)
    index, value, work = np.unravel_index(np.arange(query.dimension), shape)
    shifted = (value + offsets[index]) % shape[1]
    return np.ravel_multi_index((index, shifted, work), shape)


def apply_query_unitary(query: QuerySpec, f: Oracle, state: np.ndarray) -> np.ndarray:
    """Return Q_f|state>.

    Raises:
        ContractViolationError: If the state has the wrong dimension or is not normalised
        UndefinedFunctionalError: If tau(i) names a functional the oracle cannot evaluate
    """
    state = np.asarray(state, dtype=complex)
    if state.shape != (query.dimension,):
        raise ContractViolationError(
            "State dimension does not match the query",
            details={"expected": query.dimension, "got": state.shape},
        )
    norm = float(np.linalg.norm(state))
    if abs(norm - 1.0) > NORM_TOLERANCE:
        raise ContractViolationError("State is not normalised", details={"norm": norm})
    result = np.empty_like(state)
    result[query_permutation(query, f)] = state
    return result


def query_matrix(query: QuerySpec, f: Oracle) -> np.ndarray:
    """Dense permutation matrix of Q_f."""
    dim = query.dimension
    matrix = np.zeros((dim, dim))
    matrix[query_permutation(query, f), np.arange(dim)] = 1.0
    logger.debug("Built %sx%s query matrix", dim, dim)
    return matrix
