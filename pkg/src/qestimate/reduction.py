"""Integer weight replication: reduces a weighted mean to an unweighted one.

With h(i) = floor(n g(i)) and M = sum h(i), the replicated sequence
(Rf)(j) = f(eta(j)) has mean S_M(Rf) = (nN/M) S_{N, h/n} f.
"""

import logging
from dataclasses import dataclass

import numpy as np

from src.core.exceptions import InputError, ZeroReductionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeightReduction:
    """Result of replicating nonnegative weights at resolution n.

    Args:
        n: Resolution of the truncation
        h: Integer multiplicities floor(n g(i))
        m_cum: Cumulative sums m_0 = 0, ..., m_N = M
    """

    n: int
    h: np.ndarray
    m_cum: np.ndarray

    @property
    def N(self) -> int:
        return int(self.h.shape[0])

    @property
    def M(self) -> int:
        return int(self.m_cum[-1])

    @property
    def g_tilde(self) -> np.ndarray:
        """Truncated weights h / n."""
        return self.h / self.n

    @property
    def scale(self) -> float:
        """M / (nN), the factor turning S_M(Rf) into S_{N, g_tilde} f."""
        return self.M / (self.n * self.N)

    def eta(self, j) -> np.ndarray:
        """Original index of replicated index j: m_i <= j < m_{i+1}."""
        j = np.asarray(j)
        if np.any(j < 0) or np.any(j >= self.M):
            raise InputError("Replicated index out of range", details={"M": self.M})
        return np.searchsorted(self.m_cum, j, side="right") - 1

    def replicate(self, values: np.ndarray) -> np.ndarray:
        """The sequence Rf as an explicit array of length M."""
        return np.repeat(np.asarray(values), self.h)

    def reduced_mean(self, values: np.ndarray):
        """S_M(Rf) without materialising Rf."""
        return (self.h * np.asarray(values)).sum() / self.M


def reduce_weights(g: np.ndarray, n: int) -> WeightReduction:
    """Replicate nonnegative weights g at resolution n.

    Raises:
        InputError: If a weight is negative or n < 1
        ZeroReductionError: If every multiplicity floors to zero

    Examples:
        >>> reduction = reduce_weights(np.array([1.5, 0.9, 0.6]), 10)
        >>> reduction.h.tolist(), reduction.M
        ([15, 9, 6], 30)
    """
    g = np.asarray(g, dtype=float)
    if n < 1:
        raise InputError("Resolution n must be positive", details={"n": n})
    if np.any(g < 0):
        raise InputError("Weights must be nonnegative for the reduction")
    h = np.floor(n * g).astype(np.int64)
    m_cum = np.concatenate([[0], np.cumsum(h)])
    if m_cum[-1] == 0:
        raise ZeroReductionError(
            "All multiplicities are zero", details={"n": n, "max_weight": float(g.max(initial=0.0))}
        )
    logger.debug("Reduced %s weights at n=%s to M=%s", g.shape[0], n, int(m_cum[-1]))
    return WeightReduction(n=int(n), h=h, m_cum=m_cum)
