from math import log, pi, sqrt

import numpy as np
import pytest
from scipy import integrate

from src.core.config import QuadratureConfig
from src.qestimate.integration import frame_cells
from src.qestimate.quadrature import cell_integrals, radial_rule, tensor_rule
from src.qestimate.regions import Ball, Box, Complement, Intersection

# ------------------- FIXTURES ------------------- #


@pytest.fixture
def unit_square_cells():
    """Create the 16 dyadic cells of the unit square."""
    return frame_cells(Box.unit(2), 2)


@pytest.fixture
def disk_cells():
    """Create the 16 dyadic cells of [-1, 1]^2."""
    return frame_cells(Box([-1.0, -1.0], [1.0, 1.0]), 2)


def log_kernel(points):
    """-(1/2 pi) ln|y|."""
    return -np.log(np.linalg.norm(points, axis=1)) / (2 * pi)


# ------------------- RULES ------------------- #


class TestRules:
    """Test the reference rules."""

    @pytest.mark.parametrize("d", [0, 1, 2, 3])
    def test_tensor_rule_weights(self, d):
        points, weights = tensor_rule(d, 8)
        assert points.shape == (8**d, d)
        assert weights.sum() == pytest.approx(1.0)

    @pytest.mark.parametrize("gamma", [-0.5, 0.0, 1.0, 1.5])
    def test_radial_rule_moments(self, gamma):
        u, w = radial_rule(gamma, 16, 8)
        assert (w * u**gamma).sum() == pytest.approx(1.0 / (gamma + 1.0), rel=1e-10)
        assert (w * u ** (gamma + 2)).sum() == pytest.approx(1.0 / (gamma + 3.0), rel=1e-10)


# ------------------- CELL INTEGRALS ------------------- #


class TestCellIntegrals:
    """Test per-cell weight integrals."""

    def test_constant_weight(self, unit_square_cells):
        weights = cell_integrals(lambda x: 1.0, *unit_square_cells)
        assert np.allclose(weights, 1 / 16)

    def test_polynomial_exact(self, unit_square_cells):
        weights = cell_integrals(lambda x: x[:, 0] ** 2 * x[:, 1] ** 3, *unit_square_cells)
        assert weights.sum() == pytest.approx(1 / 12, abs=1e-14)

    def test_inverse_distance_square(self, unit_square_cells):
        weights = cell_integrals(
            lambda x: 1 / np.linalg.norm(x, axis=1),
            *unit_square_cells,
            singular_points=np.zeros((1, 2)),
            sigma=-1.0,
        )
        assert weights.sum() == pytest.approx(2 * log(1 + sqrt(2)), abs=1e-9)

    def test_inverse_sqrt_interval(self):
        lower, upper = frame_cells(Box.unit(1), 3)
        weights = cell_integrals(
            lambda x: np.abs(x[:, 0]) ** -0.5, lower, upper, singular_points=[[0.0]], sigma=-0.5
        )
        assert weights.sum() == pytest.approx(2.0, abs=1e-10)

    def test_interior_singular_point(self, unit_square_cells):
        center = np.array([[0.3, 0.6]])
        weights = cell_integrals(
            lambda x: np.linalg.norm(x - center, axis=1) ** -0.5,
            *unit_square_cells,
            singular_points=center,
            sigma=-0.5,
        )
        reference, _ = integrate.dblquad(
            lambda y, x: ((x - 0.3) ** 2 + (y - 0.6) ** 2) ** -0.25,
            0.0,
            1.0,
            0.0,
            1.0,
            epsabs=1e-11,
            epsrel=1e-11,
        )
        assert weights.sum() == pytest.approx(reference, rel=1e-7)

    def test_disk_area(self, disk_cells):
        weights = cell_integrals(lambda x: 1.0, *disk_cells, region=Ball([0.0, 0.0]))
        assert weights.sum() == pytest.approx(pi, abs=1e-2)

    def test_disk_log_weight(self, disk_cells):
        weights = cell_integrals(
            log_kernel, *disk_cells, region=Ball([0.0, 0.0]), singular_points=np.zeros((1, 2))
        )
        assert weights.sum() == pytest.approx(0.25, abs=1e-3)
        assert np.all(weights >= -1e-12)

    def test_ball_newton_weight(self):
        lower, upper = frame_cells(Box(-np.ones(3), np.ones(3)), 1)
        weights = cell_integrals(
            lambda x: 1 / (4 * pi * np.linalg.norm(x, axis=1)),
            lower,
            upper,
            region=Ball(np.zeros(3)),
            singular_points=np.zeros((1, 3)),
            sigma=-1.0,
            config=QuadratureConfig(partial_depth=2),
        )
        assert weights.sum() == pytest.approx(0.5, abs=1e-2)

    def test_complex_weight(self, unit_square_cells):
        weights = cell_integrals(lambda x: np.exp(1j * x[:, 0]), *unit_square_cells)
        assert np.iscomplexobj(weights)
        assert weights.sum() == pytest.approx((np.exp(1j) - 1) / 1j, abs=1e-12)

    def test_region_and_complement_partition(self, disk_cells):
        weight = lambda x: np.exp(x[:, 0] + 0.5 * x[:, 1])  # noqa: E731
        frame = Box([-1.0, -1.0], [1.0, 1.0])
        near = Ball([0.2, 0.1], 0.6)
        inside = cell_integrals(weight, *disk_cells, region=Intersection([frame, near]))
        outside = cell_integrals(weight, *disk_cells, region=Intersection([frame, Complement(near)]))
        whole = cell_integrals(weight, *disk_cells)
        assert np.allclose(inside + outside, whole, atol=1e-12)

    def test_log_singularity_at_shared_corner(self, unit_square_cells):
        weights = cell_integrals(
            lambda x: np.log(np.linalg.norm(x - 0.5, axis=1)),
            *unit_square_cells,
            singular_points=[[0.5, 0.5]],
        )
        assert weights.sum() == pytest.approx((pi / 2 - 3 - log(2)) / 2, abs=1e-9)
