"""Budget plans of the multilevel operator estimator and the rate exponents it targets.

With mu = min(s, d+sigma, d) and a leaf whose error decays like budget^-lambda,
the plan compares mu / lambda with d1:

    deep      mu/lambda > d1   m = ceil(log n / (d1+tau)),  N_l = ceil(n 2^(-(d1+tau) l))
    critical  mu/lambda = d1   m = ceil(log n / d1),        N_l = ceil(n m^-1 2^(-d1 l))
    shallow   mu/lambda < d1   m = ceil(log n / d1),        N_l = ceil(n 2^(-d1 l - tau (m-l)))

where log is base 2 and tau is half the gap between mu/lambda and d1. The base
level always gets N0 = n. Boost counts are the smallest integers that make the
union bound over all leaves at most 1/4.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

from src.core.data_types import EstimatorBackend, Regime, Setting
from src.core.exceptions import InputError

logger = logging.getLogger(__name__)

EXPONENT_TOLERANCE = 1e-12
EPSILON_0 = 0.1


def backend_exponent(backend: Union[EstimatorBackend, str], d: int) -> float:
    """Error exponent lambda of one leaf estimator."""
    backend = EstimatorBackend(backend)
    if backend is EstimatorBackend.MONTE_CARLO:
        return 0.5
    if backend is EstimatorBackend.DETERMINISTIC:
        return 1.0 / d
    return 1.0


def is_boosted(backend: Union[EstimatorBackend, str]) -> bool:
    """Randomized leaves are repeated; deterministic and exact ones are not."""
    return EstimatorBackend(backend) in (EstimatorBackend.QUANTUM, EstimatorBackend.MONTE_CARLO)


def smallest_boost(count: float, target: float) -> int:
    """Smallest nu >= 1 with count * exp(-nu / 8) <= target."""
    if count <= target:
        return 1
    nu = max(1, math.ceil(8.0 * math.log(count / target) - 1e-9))
    while count * math.exp(-nu / 8.0) > target:
        nu += 1
    return nu


def _same(a: float, b: float) -> bool:
    return abs(a - b) <= EXPONENT_TOLERANCE


def classify_regime(s: float, sigma: float, d: int, d1: int, leaf_exponent: float = 1.0) -> Regime:
    """Regime of the multilevel plan for a leaf exponent lambda."""
    if d1 == 0:
        return Regime.POINT
    mu = min(s, d + sigma, d) / leaf_exponent
    if _same(mu, d1):
        return Regime.CRITICAL
    return Regime.DEEP if mu > d1 else Regime.SHALLOW


@dataclass(frozen=True)
class RateExponents:
    """Exponents of the error bounds for a kernel class and input smoothness r.

    Examples:
        >>> rates = RateExponents(d=2, d1=1, s=2, sigma=-1.0)
        >>> rates.regime.name, rates.beta, rates.multilevel_exponent
        ('CRITICAL', 4.0, 1.0)
    """

    d: int
    d1: int
    s: float
    sigma: float
    r: Optional[int] = None

    @property
    def mu(self) -> float:
        return min(self.s, self.d + self.sigma, self.d)

    @property
    def regime(self) -> Regime:
        return classify_regime(self.s, self.sigma, self.d, self.d1)

    @property
    def alpha0(self) -> int:
        """1 when s = d + sigma, else 0."""
        return 1 if _same(self.s, self.d + self.sigma) else 0

    @property
    def alpha1(self) -> int:
        return 4 if self.d1 == self.d else 0

    @property
    def beta(self) -> float:
        """Log power of the multilevel bound."""
        regime = self.regime
        if regime in (Regime.POINT, Regime.DEEP):
            return 0.0
        if regime is Regime.CRITICAL:
            return 4.0
        return min(self.s, self.d + self.sigma) / self.d1 + self.alpha0

    @property
    def kappa(self) -> float:
        """Log power of the smooth-input bound."""
        self._require_r()
        d, d1, sigma, r = self.d, self.d1, self.sigma, self.r
        head = min(d + sigma, d)
        if d1 == 0 or head > d1:
            return 0.0
        if _same(head, d1):
            return 4.0
        if d1 == d:
            return (d + sigma) / d1
        left, right = (r + d + sigma) / d1, r / d + 1.0
        if _same(left, right):
            return r / d + 6.0 + EPSILON_0
        return 4.0 if left < right else 4.0 + EPSILON_0

    @property
    def multilevel_exponent(self) -> float:
        """Exponent of n in the multilevel bound for continuous inputs."""
        if self.d1 == 0:
            return 1.0
        return min(self.s / self.d1, (self.d + self.sigma) / self.d1, 1.0)

    def _require_r(self):
        if self.r is None:
            raise InputError("Input smoothness r is required for this exponent")

    def smooth_exponent(self, leaf: float = 1.0) -> float:
        """min((r+d+sigma)/d1, r/d + leaf): the bound for C^r inputs."""
        self._require_r()
        tail = self.r / self.d + leaf
        if self.d1 == 0:
            return tail
        return min((self.r + self.d + self.sigma) / self.d1, tail)

    def setting_exponents(self) -> Dict[Setting, float]:
        """Exponents of the deterministic, randomized and quantum settings."""
        self._require_r()
        return {
            Setting.DETERMINISTIC: self.r / self.d,
            Setting.RANDOMIZED: self.smooth_exponent(0.5),
            Setting.QUANTUM: self.smooth_exponent(1.0),
        }

    def speedups(self) -> Tuple[float, float]:
        """Exponent gain of quantum over deterministic and over randomized."""
        exponents = self.setting_exponents()
        quantum = exponents[Setting.QUANTUM]
        return quantum - exponents[Setting.DETERMINISTIC], quantum - exponents[Setting.RANDOMIZED]


@dataclass(frozen=True)
class MultilevelPlan:
    """Levels, budgets and boosts of one multilevel run.

    Args:
        n: Nominal budget
        m: Top level; levels 0..m-1 carry difference terms
        N0: Budget of each base-level integral
        budgets: N_l for l = 0..m-1
        nu0: Boost of the base-level integrals
        boosts: nu_l for l = 0..m-1
        regime: Budget regime
        tau: Slack of the deep and shallow regimes
        d: Dimension of Q2
        d1: Dimension of Q1
        degree: Interpolation degree
        leaf_exponent: lambda of the leaf estimators
        predicted_exponent: Exponent of n in the error bound
    """

    n: int
    m: int
    N0: int
    budgets: Tuple[int, ...]
    nu0: int
    boosts: Tuple[int, ...]
    regime: Regime
    tau: float
    d: int
    d1: int
    degree: int
    leaf_exponent: float
    predicted_exponent: float

    @property
    def base_points(self) -> int:
        """|Gamma_0|."""
        return (self.degree + 1) ** self.d1

    @property
    def fine_points(self) -> int:
        """|Gamma_hat_li|, the same for every cube."""
        return (2 * self.degree + 1) ** self.d1

    def cubes(self, level: int) -> int:
        return 2 ** (self.d1 * level)

    def union_bound(self) -> float:
        """Sum of the leaf failure bounds e^(-nu/8)."""
        total = self.base_points * math.exp(-self.nu0 / 8.0)
        for level, nu in enumerate(self.boosts):
            total += 2 * self.cubes(level) * self.fine_points * math.exp(-nu / 8.0)
        return total

    def level_queries(self, level: int) -> int:
        """Upper bound on the queries of the near and far leaves of one level."""
        return 2 * self.cubes(level) * self.fine_points * self.boosts[level] * self.budgets[level]

    def planned_queries(self) -> int:
        """Upper bound on the total query count."""
        base = self.base_points * self.nu0 * self.N0
        return base + sum(self.level_queries(level) for level in range(self.m))

    def rows(self) -> List[Dict[str, float]]:
        """One row per level for the plan dump; level -1 is the base level."""
        rows = [
            {
                "level": -1,
                "cubes": 1,
                "budget": self.N0,
                "boost": self.nu0,
                "grid_points": self.base_points,
                "queries": self.base_points * self.nu0 * self.N0,
                "predicted_exponent": self.predicted_exponent,
            }
        ]
        for level in range(self.m):
            rows.append(
                {
                    "level": level,
                    "cubes": self.cubes(level),
                    "budget": self.budgets[level],
                    "boost": self.boosts[level],
                    "grid_points": self.cubes(level) * self.fine_points,
                    "queries": self.level_queries(level),
                    "predicted_exponent": self.predicted_exponent,
                }
            )
        return rows


def select_budgets(
    n: int,
    s: int,
    sigma: float,
    d: int,
    d1: int,
    leaf_exponent: float = 1.0,
    boosted: bool = True,
) -> MultilevelPlan:
    """Plan levels, per-level budgets and boosts for a nominal budget n.

    Args:
        n: Nominal budget, at least 2
        s: Kernel smoothness order
        sigma: Kernel singularity exponent
        d: Dimension of Q2
        d1: Dimension of Q1
        leaf_exponent: lambda of the leaf estimators, 1 for quantum leaves
        boosted: Whether leaves are repeated; False gives nu = 1 throughout

    Raises:
        InputError: If n < 2, s < 1, sigma <= -d or d1 is outside 0..d

    Examples:
        >>> plan = select_budgets(1024, s=3, sigma=0.0, d=2, d1=1)
        >>> plan.regime.name, plan.m, plan.budgets[:3]
        ('DEEP', 7, (1024, 363, 128))
    """
    if n < 2:
        raise InputError("Multilevel plans need n >= 2", details={"n": n})
    if s < 1:
        raise InputError("Smoothness order must be at least 1", details={"s": s})
    if sigma <= -d:
        raise InputError("Kernel is not integrable: sigma <= -d", details={"sigma": sigma, "d": d})
    if not 0 <= d1 <= d:
        raise InputError("Plans need 0 <= d1 <= d", details={"d": d, "d1": d1})
    if leaf_exponent <= 0:
        raise InputError("Leaf exponent must be positive", details={"leaf_exponent": leaf_exponent})

    degree = max(s - 1, 1)
    predicted = leaf_exponent if d1 == 0 else min(s / d1, (d + sigma) / d1, leaf_exponent)
    regime = classify_regime(s, sigma, d, d1, leaf_exponent)
    if regime is Regime.POINT:
        logger.debug("Point plan: one integral with budget %s", n)
        return MultilevelPlan(
            n=n, m=0, N0=n, budgets=(), nu0=1, boosts=(), regime=regime, tau=0.0,
            d=d, d1=d1, degree=degree, leaf_exponent=leaf_exponent, predicted_exponent=predicted,
        )

    log_n = math.log2(n)
    mu = min(s, d + sigma, d) / leaf_exponent
    tau = 0.0
    if regime is Regime.DEEP:
        tau = (mu - d1) / 2.0
        m = max(1, math.ceil(log_n / (d1 + tau)))
        budgets = [math.ceil(n * 2.0 ** (-(d1 + tau) * level)) for level in range(m)]
    elif regime is Regime.CRITICAL:
        m = max(1, math.ceil(log_n / d1))
        budgets = [math.ceil(n / m * 2.0 ** (-d1 * level)) for level in range(m)]
    else:
        tau = (d1 - mu) / 2.0
        m = max(1, math.ceil(log_n / d1))
        budgets = [math.ceil(n * 2.0 ** (-d1 * level - tau * (m - level))) for level in range(m)]

    base_points = (degree + 1) ** d1
    fine_points = (2 * degree + 1) ** d1
    if boosted:
        nu0 = smallest_boost(base_points, 2.0**-3)
        boosts = [
            smallest_boost(2 * 2 ** (d1 * level) * fine_points, 2.0 ** -(level + 4))
            for level in range(m)
        ]
    else:
        nu0, boosts = 1, [1] * m

    plan = MultilevelPlan(
        n=n, m=m, N0=n, budgets=tuple(budgets), nu0=nu0, boosts=tuple(boosts), regime=regime,
        tau=tau, d=d, d1=d1, degree=degree, leaf_exponent=leaf_exponent, predicted_exponent=predicted,
    )
    logger.debug(
        "%s plan: m=%s tau=%.3g budgets=%s boosts=%s planned queries=%s",
        regime.name, m, tau, plan.budgets, plan.boosts, plan.planned_queries(),
    )
    return plan
