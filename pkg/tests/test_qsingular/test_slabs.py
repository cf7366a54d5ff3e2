import math

import numpy as np
import pytest

from src.core.exceptions import InputError
from src.qestimate.regions import Ball
from src.qsingular.kernel import power_kernel
from src.qsingular.slabs import SlabDecomposition, needs_slabs, schedule_exponents, slab_region

# ------------------- FIXTURES ------------------- #


@pytest.fixture
def strong_kernel():
    """Create |x - y|^-1.5 with d = 2, d1 = 1, so d + sigma < d1 < d."""
    return power_kernel(-1.5, d=2, d1=1)


@pytest.fixture
def slabs(strong_kernel):
    """Create the slab decomposition for r = 1 and n = 16."""
    return SlabDecomposition(strong_kernel, r=1, n=16)


# ------------------- GEOMETRY ------------------- #


class TestGeometry:
    """Test the slabs H_l."""

    def test_slabs_partition_unit_square(self, slabs, rng):
        points = rng.random((2000, 2))
        memberships = sum(slab.region.contains(points).astype(int) for slab in slabs.slabs)
        assert np.all(memberships == 1)
        assert np.all(slabs.slab_of(points) >= 0)

    def test_slab_distance_to_q1(self, slabs):
        for slab in slabs.slabs[:-1]:
            lower, _ = slab.region.bounds
            assert lower[1] == pytest.approx(2.0 ** -(slab.level + 1))

    def test_top_slab_touches_q1(self, slabs):
        top = slabs.slabs[-1]
        assert top.level == slabs.m
        assert np.allclose(top.region.bounds[1], [1.0, 2.0**-slabs.m])

    def test_codimension_two(self):
        region = slab_region(d=3, d1=1, level=0, top=2)
        assert region.lowers.shape == (3, 3)
        assert np.allclose(region.uppers[:, 0], 1.0)

    def test_slab_case_detection(self, strong_kernel):
        assert needs_slabs(strong_kernel)
        assert not needs_slabs(power_kernel(-1.0, d=2, d1=1))
        assert not needs_slabs(power_kernel(-1.5, d=2, d1=2))


# ------------------- BUDGETS ------------------- #


class TestBudgets:
    """Test grid factors, budgets and boosts of the slabs."""

    def test_small_schedule(self, strong_kernel):
        decomposition = SlabDecomposition(strong_kernel, r=1, n=8)
        assert decomposition.m == 3
        assert decomposition.sub_case == 2
        assert [slab.p for slab in decomposition.slabs] == [3, 2, 2, 1]
        assert [slab.n for slab in decomposition.slabs] == [18, 16, 32, 16]

    def test_budget_formula(self, slabs):
        d, d1 = 2, 1
        assert slabs.slabs[-1].p == 1
        for slab in slabs.slabs:
            assert slab.n == 2 ** (d1 * (slab.level + 1)) * slab.p**d

    def test_boosts(self, slabs):
        for slab in slabs.slabs:
            expected = math.ceil(8 * (2 * math.log(slabs.m - slab.level + 1) + math.log(8)))
            assert slab.boost == expected

    def test_total_budget(self, slabs):
        n = slabs.n
        assert slabs.total_budget <= 4 * n * math.log2(n) * math.log2(math.log2(n) + 1)

    @pytest.mark.parametrize(
        "r, d, d1, sigma, sub_case, delta1, delta2",
        [
            (1, 2, 1, -1.5, 2, 0.0, 0.0),
            (1, 3, 2, -2.0, 1, 1 / 12, 0.0),
            (4, 3, 2, -1.5, 3, 0.0, 5 / 84),
        ],
    )
    def test_sub_cases(self, r, d, d1, sigma, sub_case, delta1, delta2):
        case, first, second = schedule_exponents(r, d, d1, sigma)
        assert case == sub_case
        assert first == pytest.approx(delta1)
        assert second == pytest.approx(delta2)


# ------------------- RESTRICTED KERNELS ------------------- #


class TestRestrictedKernels:
    """Test the class of the restricted kernels k_l."""

    def test_sigma1(self, slabs):
        assert slabs.sigma1 == -1.0
        assert all(slab.kernel.sigma == -1.0 for slab in slabs.slabs[:-1])
        assert slabs.slabs[-1].kernel.sigma == -1.5

    def test_norm_growth(self, slabs):
        for level in range(slabs.m + 1):
            assert slabs.kernel_ratio(level, samples=400, seed=level) <= 2.0

    def test_rejects_non_slab_kernel(self):
        with pytest.raises(InputError):
            SlabDecomposition(power_kernel(0.0, d=2, d1=1), r=1, n=16)

    def test_rejects_other_domains(self):
        kernel = power_kernel(-1.5, d=2, d1=1, domain=Ball([0.0, 0.0]))
        with pytest.raises(InputError):
            SlabDecomposition(kernel, r=1, n=16)
