import numpy as np
import pytest

from src.core.data_types import Setting
from src.core.exceptions import InputError
from src.pdelab.manifolds import circle_manifold, point_manifold
from src.pdelab.rhs import exact_solution, make_rhs
from src.pdelab.solver import green_integral, green_representation_check, solve_on_manifold

# ------------------- FIXTURES ------------------- #


@pytest.fixture
def probe_points():
    """Create five inner points of the unit disk."""
    return np.array([[0.0, 0.0], [0.3, 0.1], [-0.5, 0.2], [0.1, -0.6], [0.4, 0.4]])


# ------------------- REPRESENTATION ------------------- #


class TestGreenRepresentation:
    """Test u(x) = int G(x, y) f(y) dy by polar quadrature."""

    @pytest.mark.parametrize("family", ["constant", "bubble", "zero"])
    def test_disk(self, family, probe_points):
        assert green_representation_check("poisson-disk", family, probe_points) <= 1e-6

    @pytest.mark.parametrize("family", ["constant", "bubble"])
    def test_ball(self, family):
        points = np.array([[0.0, 0.0, 0.0], [0.2, -0.1, 0.3], [0.0, 0.5, 0.0], [-0.3, -0.3, 0.1], [0.1, 0.1, -0.6]])
        assert green_representation_check("poisson-ball", family, points) <= 1e-6

    def test_rejects_boundary_point(self):
        with pytest.raises(InputError):
            green_integral("poisson-disk", lambda y: np.ones(y.shape[0]), [1.0, 0.0])


# ------------------- SOLVER ------------------- #


class TestSolveOnManifold:
    """Test the solution operator on points and curves."""

    def test_zero_input(self):
        solution = solve_on_manifold("poisson-disk", "zero", circle_manifold(0.5), n=32, setting="q", seed=1)
        assert np.all(solution.values == 0.0)
        assert solution.n_queries > 0

    @pytest.mark.parametrize("setting", list(Setting))
    def test_center_value(self, setting):
        solution = solve_on_manifold("poisson-disk", "constant", point_manifold([0.0, 0.0]), n=32, setting=setting, seed=7)
        assert solution.values.shape == (1,)
        assert solution.values[0] == pytest.approx(0.25, abs=5e-3)

    def test_ball_center_value(self):
        solution = solve_on_manifold(
            "poisson-ball", "constant", point_manifold([0.0, 0.0, 0.0]), n=128, setting="det"
        )
        assert solution.values[0] == pytest.approx(1.0 / 6.0, abs=5e-3)

    def test_deterministic_ignores_seed(self):
        manifold = point_manifold([0.2, 0.1])
        first = solve_on_manifold("poisson-disk", "bubble", manifold, n=32, setting="det", seed=1)
        second = solve_on_manifold("poisson-disk", "bubble", manifold, n=32, setting="det", seed=2)
        assert np.array_equal(first.values, second.values)

    def test_randomized_curve(self):
        manifold = circle_manifold(0.5, probes=9)
        rhs = make_rhs("bubble", d=2)
        solution = solve_on_manifold("poisson-disk", rhs, manifold, n=64, setting=Setting.RANDOMIZED, seed=3)
        exact = exact_solution("poisson-disk", "bubble", solution.points)
        assert solution.values.shape == (9,)
        assert np.all(np.isfinite(solution.values))
        assert solution.error(exact) < 0.5

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            solve_on_manifold("poisson-ball", "constant", circle_manifold(0.5), n=32)
