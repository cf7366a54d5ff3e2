"""Slab decomposition of Q2 = [0,1]^d around Q1 = [0,1]^d1 x {0} when d + sigma < d1 < d.

With q = d - d1, the slabs are

    H_l = [0,1]^d1 x (2^-l [0,1]^q minus 2^-(l+1) [0,1)^q)   for l < m
    H_m = [0,1]^d1 x 2^-m [0,1]^q

On H_l, l < m, the distance to Q1 is at least 2^-(l+1), so the restricted
kernel k_l lies in the class sigma1 = d1 - d with a norm that grows like
2^((sigma1 - sigma) l). Each slab gets the grid factor

    p_l = ceil(2^((d1/d - delta1)(m - l) - delta2 l)),   n_l = 2^(d1 (l+1)) p_l^d

and its own median boost nu_l = ceil(8 (2 ln(m - l + 1) + ln 8)).
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from src.core.exceptions import InputError
from src.core.lagrange import tensor_nodes
from src.core.seeds import SeedLike
from src.qestimate.regions import UnionOfBoxes
from src.qsingular.kernel import Kernel
from src.qsingular.plan import EPSILON_0, EXPONENT_TOLERANCE

logger = logging.getLogger(__name__)


def needs_slabs(kernel: Kernel) -> bool:
    """True when d + sigma < d1 < d."""
    return kernel.d + kernel.sigma < kernel.d1 - EXPONENT_TOLERANCE and kernel.d1 < kernel.d


def slab_region(d: int, d1: int, level: int, top: int) -> UnionOfBoxes:
    """H_level as a union of 2^q - 1 boxes, or a single box on the top level."""
    q = d - d1
    if level == top:
        lower = np.zeros((1, d))
        upper = np.concatenate([np.ones(d1), np.full(q, 2.0**-top)])[None, :]
        return UnionOfBoxes(lower, upper)
    side = 2.0 ** -(level + 1)
    corners = tensor_nodes(np.array([0.0, 1.0]), q)[1:]
    count = corners.shape[0]
    lowers = np.hstack([np.zeros((count, d1)), corners * side])
    uppers = np.hstack([np.ones((count, d1)), (corners + 1.0) * side])
    return UnionOfBoxes(lowers, uppers)


def schedule_exponents(r: int, d: int, d1: int, sigma: float) -> Tuple[int, float, float]:
    """Sub-case and (delta1, delta2) of the slab schedule.

    Sub-case 1 has (r+d+sigma)/d1 < r/d + 1, sub-case 2 equality, sub-case 3 the reverse.
    """
    gap = (r + d) * d1 / d - (r + d + sigma)
    if abs(gap) <= EXPONENT_TOLERANCE:
        return 2, 0.0, 0.0
    if gap > 0:
        return 1, gap / (2.0 * (r + d)), 0.0
    return 3, 0.0, -gap / (2.0 * (r + d))


def slab_boost(level: int, top: int) -> int:
    return math.ceil(8.0 * (2.0 * math.log(top - level + 1) + math.log(8.0)))


@dataclass(frozen=True)
class Slab:
    """One slab H_l with its restricted kernel and budgets."""

    level: int
    region: UnionOfBoxes
    kernel: Kernel
    p: int
    n: int
    boost: int

    @property
    def cell_side(self) -> float:
        """Side 2^-(l+1) / p_l of the deterministic interpolation cells."""
        return 2.0 ** -(self.level + 1) / self.p


class SlabDecomposition:
    """Slabs, restricted kernels, grid factors and budgets for a budget n.

    Args:
        kernel: Kernel on the unit cube with d + sigma < d1 < d
        r: Smoothness of the input
        n: Nominal budget

    Raises:
        InputError: If the kernel is outside the slab case or its domain is not the unit cube

    Examples:
        >>> from src.qsingular.kernel import power_kernel
        >>> slabs = SlabDecomposition(power_kernel(-1.5, d=2, d1=1), r=1, n=8)
        >>> slabs.m, slabs.sub_case, [slab.n for slab in slabs.slabs]
        (3, 2, [18, 16, 32, 16])
    """

    def __init__(self, kernel: Kernel, r: int, n: int, epsilon0: float = EPSILON_0):
        if not needs_slabs(kernel):
            raise InputError(
                "Slabs need d + sigma < d1 < d",
                details={"d": kernel.d, "d1": kernel.d1, "sigma": kernel.sigma},
            )
        lower, upper = kernel.domain.bounds
        if not (np.allclose(lower, 0.0) and np.allclose(upper, 1.0)):
            raise InputError("Slabs need Q2 = [0,1]^d", details={"bounds": (lower.tolist(), upper.tolist())})
        if n < 2 or r < 1:
            raise InputError("Slabs need n >= 2 and r >= 1", details={"n": n, "r": r})
        self.kernel = kernel
        self.r = r
        self.n = n
        self.epsilon0 = epsilon0
        d, d1 = kernel.d, kernel.d1
        self.sigma1 = float(d1 - d)
        self.m = max(1, math.ceil(math.log2(n) / d1))
        self.sub_case, self.delta1, self.delta2 = schedule_exponents(r, d, d1, kernel.sigma)
        self.slabs: List[Slab] = [self._slab(level) for level in range(self.m + 1)]
        logger.debug(
            "Slab schedule: m=%s sub-case %s deltas=(%.3g, %.3g) budgets=%s",
            self.m,
            self.sub_case,
            self.delta1,
            self.delta2,
            [slab.n for slab in self.slabs],
        )

    def _slab(self, level: int) -> Slab:
        d, d1, m = self.kernel.d, self.kernel.d1, self.m
        exponent = (d1 / d - self.delta1) * (m - level) - self.delta2 * level
        p = max(1, math.ceil(2.0**exponent - 1e-9))
        region = slab_region(d, d1, level, m)
        sigma = self.sigma1 if level < m else self.kernel.sigma
        kernel = self.kernel.restricted(region, sigma=sigma)
        return Slab(
            level=level,
            region=region,
            kernel=kernel,
            p=p,
            n=2 ** (d1 * (level + 1)) * p**d,
            boost=slab_boost(level, m),
        )

    @property
    def total_budget(self) -> int:
        return sum(slab.n for slab in self.slabs)

    def norm_growth(self, level: int) -> float:
        """2^((sigma1 - sigma) l), the expected growth of the restricted norm."""
        if level == self.m:
            return 1.0
        return 2.0 ** ((self.sigma1 - self.kernel.sigma) * level)

    def kernel_ratio(self, level: int, samples: int = 1000, seed: SeedLike = None) -> float:
        """Sampled class-bound ratio of k_l over Q1 x H_l, divided by the expected growth."""
        ratio = self.slabs[level].kernel.sample_bound_ratio(samples=samples, seed=seed)
        return ratio / self.norm_growth(level)

    def slab_of(self, points: np.ndarray) -> np.ndarray:
        """Index of the first slab containing each point, -1 outside [0,1]^d."""
        points = np.atleast_2d(points)
        index = np.full(points.shape[0], -1)
        for slab in reversed(self.slabs):
            index[slab.region.contains(points)] = slab.level
        return index
