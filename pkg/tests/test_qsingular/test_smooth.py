import numpy as np
import pytest

from src.classical.interpolant import det_interp, det_interp_on_boxes
from src.core.data_types import EstimatorBackend
from src.core.exceptions import InputError
from src.qsingular.kernel import constant_kernel, power_kernel
from src.qsingular.multilevel import operator_reference
from src.qsingular.slabs import SlabDecomposition
from src.qsingular.smooth import smooth_apply, smooth_estimator, split_budget

# ------------------- FIXTURES ------------------- #


@pytest.fixture
def log_kernel():
    """Create -ln|x - y| with d = 2, d1 = 1."""
    return power_kernel(0.0, d=2, d1=1)


def bilinear(y):
    return 0.25 + 0.25 * y[:, 0] * y[:, 1]


def linear(y):
    return 0.25 + 0.25 * y[:, 0] + 0.25 * y[:, 1]


# ------------------- BUDGET SPLIT ------------------- #


class TestBudgetSplit:
    """Test the split between the deterministic and randomized parts."""

    @pytest.mark.parametrize("n, expected", [(8, (4, 4)), (9, (4, 5)), (64, (32, 32))])
    def test_split(self, n, expected):
        assert split_budget(n) == expected


# ------------------- POLYNOMIAL INPUTS ------------------- #


class TestPolynomialInputs:
    """Inputs reproduced by the interpolant need no randomized part."""

    def test_bilinear_input(self, log_kernel):
        estimate = smooth_apply(log_kernel, bilinear, r=1, n=32, backend=EstimatorBackend.QUANTUM, seed=3)
        assert estimate.n_queries == det_interp(bilinear, 1, 2, 16).sample_count
        nodes = estimate.approximant.grid_points()
        expected = operator_reference(log_kernel, bilinear, nodes)
        assert np.allclose(estimate(nodes), expected, rtol=1e-5, atol=1e-8)

    def test_seed_irrelevant(self, log_kernel):
        first = smooth_apply(log_kernel, bilinear, r=1, n=32, seed=1)
        second = smooth_apply(log_kernel, bilinear, r=1, n=32, seed=2)
        assert np.allclose(first.approximant.coeffs, second.approximant.coeffs)


# ------------------- RESIDUAL PART ------------------- #


class TestResidualPart:
    """Test the scaled multilevel run on f - Pf."""

    def test_constant_kernel_exact(self):
        # Pf = 1 from the corner samples, T(Pf) = 1 and T(f - Pf) = -1.
        kernel = constant_kernel(2, 1, s=2)

        def f(y):
            return np.cos(2.0 * np.pi * y[:, 0])

        estimate = smooth_apply(kernel, f, r=1, n=8, backend=EstimatorBackend.EXACT)
        assert estimate.n_queries == 4
        points = np.linspace(0.0, 1.0, 5)[:, None]
        assert np.allclose(estimate(points), 0.0, atol=1e-8)

    def test_randomized_residual_costs_queries(self, log_kernel):
        def f(y):
            return 0.5 * np.cos(np.pi * y[:, 0]) * np.cos(np.pi * y[:, 1])

        est = smooth_estimator(log_kernel, f, r=1, n=64, backend=EstimatorBackend.MONTE_CARLO)
        assert est.n_queries > det_interp(f, 1, 2, 32).sample_count
        first, second = est.estimate(11), est.estimate(11)
        assert np.array_equal(first.coeffs, second.coeffs)
        assert np.all(np.isfinite(first.coeffs))


# ------------------- SLAB PATH ------------------- #


class TestSlabPath:
    """Test the composition over slabs when d + sigma < d1 < d."""

    def test_linear_input_matches_reference(self):
        kernel = power_kernel(-1.5, d=2, d1=1)
        estimate = smooth_apply(kernel, linear, r=1, n=8, backend=EstimatorBackend.QUANTUM, seed=5)

        decomposition = SlabDecomposition(kernel, r=1, n=8)
        samples = sum(
            det_interp_on_boxes(linear, 1, slab.region, slab.cell_side).sample_count
            for slab in decomposition.slabs
        )
        assert estimate.n_queries == samples

        points = np.array([[0.0], [1.0]])
        expected = operator_reference(kernel, linear, points)
        assert np.allclose(estimate(points), expected, rtol=1e-3)


# ------------------- VALIDATION ------------------- #


class TestValidation:
    """Test rejected inputs."""

    def test_rejects_zero_smoothness(self, log_kernel):
        with pytest.raises(InputError):
            smooth_estimator(log_kernel, bilinear, r=0, n=32)

    def test_rejects_tiny_budget(self, log_kernel):
        with pytest.raises(InputError):
            smooth_estimator(log_kernel, bilinear, r=1, n=4)
