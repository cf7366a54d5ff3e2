import numpy as np
import pytest

from src.core.exceptions import InputError, ZeroReductionError
from src.qestimate.reduction import reduce_weights

# ------------------- EXAMPLES ------------------- #


class TestReduceWeights:
    """Test the integer replication of weights."""

    def test_hand_example(self):
        reduction = reduce_weights(np.array([1.5, 0.9, 0.6]), 10)
        assert reduction.h.tolist() == [15, 9, 6]
        assert reduction.M == 30
        assert reduction.m_cum.tolist() == [0, 15, 24, 30]
        assert reduction.eta(np.arange(15)).tolist() == [0] * 15
        assert reduction.eta(np.arange(15, 24)).tolist() == [1] * 9
        assert reduction.eta(np.arange(24, 30)).tolist() == [2] * 6

    @pytest.mark.parametrize("n", [1, 3, 8])
    def test_uniform_weights(self, n):
        reduction = reduce_weights(np.ones(5), n)
        assert reduction.h.tolist() == [n] * 5
        assert reduction.M == 5 * n
        j = np.arange(reduction.M)
        assert np.array_equal(reduction.eta(j), j // n)

    def test_zero_reduction(self):
        with pytest.raises(ZeroReductionError):
            reduce_weights(np.array([1 / 20, 0.0, 0.0]), 10)

    @pytest.mark.parametrize(
        "g,n",
        [
            (np.array([1.0, -0.5]), 4),
            (np.array([1.0, 1.0]), 0),
        ],
    )
    def test_invalid_inputs(self, g, n):
        with pytest.raises(InputError):
            reduce_weights(g, n)

    def test_eta_out_of_range(self):
        reduction = reduce_weights(np.array([1.0, 1.0]), 2)
        with pytest.raises(InputError):
            reduction.eta(4)

    def test_replicate_matches_eta(self):
        reduction = reduce_weights(np.array([0.5, 1.2, 1.3]), 10)
        values = np.array([0.1, -0.2, 0.3])
        assert np.array_equal(reduction.replicate(values), values[reduction.eta(np.arange(reduction.M))])


# ------------------- PROPERTIES ------------------- #


class TestReductionProperties:
    """Property checks over random weights."""

    @pytest.mark.parametrize("trial", range(20))
    def test_reduction_identity(self, rng, trial):
        N = int(rng.integers(1, 65))
        n = int(rng.integers(1, 65))
        g = rng.uniform(1.0, 2.0, N)
        g = g / g.mean()
        f = rng.uniform(-1.0, 1.0, N)
        reduction = reduce_weights(g, n)
        lhs = reduction.replicate(f).mean()
        rhs = (n * N / reduction.M) * (reduction.g_tilde * f).sum() / N
        assert lhs == pytest.approx(rhs, abs=1e-12)
        assert reduction.reduced_mean(f) == pytest.approx(lhs, abs=1e-12)
        assert reduction.scale * reduction.reduced_mean(f) == pytest.approx(
            (reduction.g_tilde * f).mean(), abs=1e-12
        )

    @pytest.mark.parametrize("trial", range(10))
    def test_truncation_bounds(self, rng, trial):
        N, n = 40, int(rng.integers(1, 65))
        g = rng.exponential(1.0, N)
        g = g / g.mean()
        reduction = reduce_weights(g, n)
        gap = g - reduction.g_tilde
        assert np.all(gap >= 0)
        assert np.all(gap <= 1.0 / n + 1e-15)
        assert reduction.M <= n * N
        f = np.sign(gap)
        assert abs((g * f).mean() - (reduction.g_tilde * f).mean()) <= 1.0 / n + 1e-12

    @pytest.mark.parametrize("n", [2, 7, 32])
    def test_zero_and_sub_resolution_weights(self, n):
        g = np.array([0.0, 0.5 / n, 2.0, 0.99 / n, 1.5, 0.0])
        reduction = reduce_weights(g, n)
        assert reduction.h.tolist() == [0, 0, 2 * n, 0, int(np.floor(1.5 * n)), 0]
        assert set(reduction.eta(np.arange(reduction.M)).tolist()) == {2, 4}
        f = np.array([1.0, -1.0, 0.25, 1.0, -0.5, 1.0])
        lhs = reduction.replicate(f).mean()
        rhs = (n * g.size / reduction.M) * (reduction.g_tilde * f).sum() / g.size
        assert lhs == pytest.approx(rhs, abs=1e-12)
        assert abs((g * f).mean() - (reduction.g_tilde * f).mean()) <= 1.0 / n + 1e-12

    @pytest.mark.parametrize("trial", range(20))
    def test_reduction_identity_with_truncated_weights(self, rng, trial):
        N = int(rng.integers(2, 65))
        n = int(rng.integers(1, 65))
        g = rng.uniform(0.0, 2.0, N)
        g[rng.random(N) < 0.3] = 0.0
        tiny = rng.random(N) < 0.3
        g[tiny] = rng.uniform(0.0, 1.0 / n, int(tiny.sum()))
        g[0] = 1.0
        f = rng.uniform(-1.0, 1.0, N)
        reduction = reduce_weights(g, n)
        assert np.all(reduction.h[g < 1.0 / n] == 0)
        lhs = reduction.replicate(f).mean()
        rhs = (n * N / reduction.M) * (reduction.g_tilde * f).sum() / N
        assert lhs == pytest.approx(rhs, abs=1e-12)
        assert np.all(g - reduction.g_tilde <= 1.0 / n + 1e-15)
        assert abs((g * f).mean() - (reduction.g_tilde * f).mean()) <= 1.0 / n + 1e-12
