"""Core data type definitions shared by the simulator, the estimators and the benchmarks.

This module defines the enums that select execution backends and comparison settings,
and the two result types of the query model:
    - OutputDistribution: the finite law p_{A,f} of an algorithm's output
    - ErrorReport: the empirical error level e(S, A, f, theta) of repeated trials
"""

import math
from dataclasses import dataclass
from enum import Enum, auto
from typing import Optional, Sequence

import numpy as np

from src.core.exceptions import ContractViolationError, InputError

PROB_TOLERANCE = 1e-12
NEGATIVE_PROB_CLAMP = 1e-15


class Backend(Enum):
    """Execution backends of the query model."""

    STATEVECTOR = "statevector"  # Dense complex state, validation only
    ANALYTIC = "analytic"  # Closed-form outcome laws, desk-scale budgets


class EstimatorBackend(Enum):
    """Leaf estimators behind the MeanEstimator interface."""

    QUANTUM = "quantum"  # Amplitude estimation, rate n^-1
    MONTE_CARLO = "mc"  # Importance sampling, rate n^-1/2
    DETERMINISTIC = "det"  # Budget-limited exact sums, charged per evaluation
    EXACT = "exact"  # Refined exact sums, zero queries, testing only


class Setting(Enum):
    """Settings of the rate comparison."""

    QUANTUM = "quantum"
    RANDOMIZED = "randomized"
    DETERMINISTIC = "deterministic"

    @property
    def label(self) -> str:
        """Short legend label used in CSV files and plots."""
        return {"quantum": "q", "randomized": "ran", "deterministic": "det"}[self.value]

    @property
    def leaf_backend(self) -> EstimatorBackend:
        """Leaf estimator used by the multilevel tree in this setting."""
        return {
            Setting.QUANTUM: EstimatorBackend.QUANTUM,
            Setting.RANDOMIZED: EstimatorBackend.MONTE_CARLO,
            Setting.DETERMINISTIC: EstimatorBackend.DETERMINISTIC,
        }[self]

    def leaf_exponent(self, d: int) -> float:
        """Convergence exponent lambda of one leaf: error ~ budget^-lambda."""
        if self is Setting.QUANTUM:
            return 1.0
        if self is Setting.RANDOMIZED:
            return 0.5
        return 1.0 / d

    @classmethod
    def from_label(cls, value: str) -> "Setting":
        """Accept either the enum value or the short label."""
        for member in cls:
            if value in (member.value, member.label):
                return member
        raise InputError(f"Unknown setting: {value}", details={"setting": value})


class Regime(Enum):
    """Budget regimes of the multilevel operator algorithm."""

    POINT = auto()  # d1 = 0, a single weighted integral
    DEEP = auto()  # min(s, d+sigma, d) > d1
    CRITICAL = auto()  # min(s, d+sigma, d) = d1
    SHALLOW = auto()  # min(s, d+sigma, d) < d1


def total_variation(p: Sequence[float], q: Sequence[float]) -> float:
    """Total variation distance between two laws on the same outcome list."""
    p_arr = np.asarray(p, dtype=float)
    q_arr = np.asarray(q, dtype=float)
    if p_arr.shape != q_arr.shape:
        raise ContractViolationError(
            "Distributions must share their outcome list",
            details={"left": p_arr.shape, "right": q_arr.shape},
        )
    return 0.5 * float(np.abs(p_arr - q_arr).sum())


@dataclass(frozen=True)
class OutputDistribution:
    """Finite output law of an algorithm.

    Args:
        support: Output value for each outcome (duplicates allowed, one entry per outcome)
        probs: Probability of each outcome
        outcomes: Optional integer outcome labels, defaults to 0..len-1

    Examples:
        >>> dist = OutputDistribution(support=np.array([0.0, 1.0]), probs=np.array([0.25, 0.75]))
        >>> dist.mean()
        0.75
    """

    support: np.ndarray
    probs: np.ndarray
    outcomes: Optional[np.ndarray] = None

    def __post_init__(self):
        support = np.asarray(self.support)
        probs = np.asarray(self.probs, dtype=float)
        if support.shape[0] != probs.shape[0]:
            raise ContractViolationError(
                "Support and probabilities differ in length",
                details={"support": support.shape[0], "probs": probs.shape[0]},
            )
        if np.any(probs < -NEGATIVE_PROB_CLAMP):
            raise ContractViolationError(
                "Negative probability in output distribution",
                details={"min_prob": float(probs.min())},
            )
        probs = np.clip(probs, 0.0, None)
        total = float(probs.sum())
        if abs(total - 1.0) > PROB_TOLERANCE:
            raise ContractViolationError(
                "Output probabilities do not sum to one",
                details={"sum": total},
            )
        outcomes = (
            np.arange(probs.shape[0])
            if self.outcomes is None
            else np.asarray(self.outcomes)
        )
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "outcomes", outcomes)

    def __len__(self) -> int:
        return self.probs.shape[0]

    def mean(self):
        """Expected output value."""
        return (self.support * self.probs).sum()

    def merged(self) -> "OutputDistribution":
        """Combine outcomes with equal output values."""
        values, inverse = np.unique(self.support, return_inverse=True)
        probs = np.zeros(values.shape[0])
        np.add.at(probs, inverse, self.probs)
        return OutputDistribution(support=values, probs=probs / probs.sum())

    def probability_of(self, value, atol: float = 1e-12) -> float:
        """Total probability of outputs within atol of value."""
        return float(self.probs[np.abs(self.support - value) <= atol].sum())

    def sample(self, rng: np.random.Generator, size: Optional[int] = None):
        """Draw output values."""
        index = rng.choice(self.probs.shape[0], size=size, p=self.probs / self.probs.sum())
        return self.support[index]


@dataclass(frozen=True)
class ErrorReport:
    """Empirical error level at failure probability theta.

    eps is the smallest empirical level whose failure fraction is at most theta,
    i.e. the ceil((1 - theta) * n_trials)-th order statistic of the trial errors.
    """

    theta: float
    eps: float
    n_trials: int

    def __post_init__(self):
        if not 0.0 <= self.theta < 1.0:
            raise InputError("theta must lie in [0, 1)", details={"theta": self.theta})
        if self.n_trials < 1:
            raise InputError("At least one trial is required")

    @staticmethod
    def order_index(n_trials: int, theta: float = 0.25) -> int:
        """1-based rank of the order statistic that realises the error level."""
        return max(1, math.ceil(round((1.0 - theta) * n_trials, 9)))

    @classmethod
    def from_errors(cls, errors: Sequence[float], theta: float = 0.25) -> "ErrorReport":
        """Build the report from per-trial errors."""
        values = np.sort(np.asarray(errors, dtype=float))
        if values.size == 0:
            raise InputError("No trial errors given")
        rank = cls.order_index(values.size, theta)
        return cls(theta=theta, eps=float(values[rank - 1]), n_trials=int(values.size))


def error_quantile(errors: Sequence[float], theta: float = 0.25) -> float:
    """Empirical e(S, A, f, theta) of a set of trial errors."""
    return ErrorReport.from_errors(errors, theta).eps


@dataclass(frozen=True)
class ExperimentRecord:
    """One rung of a budget ladder: measured queries and the empirical error level.

    Args:
        problem: Benchmark problem id
        setting: Setting label (det, ran, q)
        n_queries: Largest measured query count over the trials
        err_q75: Error quantile at theta (the 3/4 quantile for theta = 1/4)
        trials: Number of trials
        seed: Master seed of the run
        wall_ms: Wall time of the rung, 0 unless recorded
    """

    problem: str
    setting: str
    n_queries: int
    err_q75: float
    trials: int
    seed: int
    wall_ms: float = 0.0

    def __post_init__(self):
        if self.n_queries < 0 or self.trials < 1:
            raise InputError(
                "Records need n_queries >= 0 and at least one trial",
                details={"n_queries": self.n_queries, "trials": self.trials},
            )
