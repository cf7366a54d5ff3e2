import numpy as np
import pytest

from src.core.lagrange import equidistant_nodes, lagrange_basis, tensor_basis, tensor_nodes

# ------------------- 1D basis ------------------- #


def test_equidistant_nodes():
    np.testing.assert_allclose(equidistant_nodes(4), [0.0, 0.25, 0.5, 0.75, 1.0])


def test_basis_is_kronecker_at_nodes():
    nodes = equidistant_nodes(3)
    np.testing.assert_allclose(lagrange_basis(nodes, nodes), np.eye(4), atol=1e-14)


@pytest.mark.parametrize("degree", [1, 2, 5])
def test_basis_reproduces_polynomials_of_its_degree(degree):
    nodes = equidistant_nodes(degree)
    t = np.linspace(-0.2, 1.2, 17)
    coeffs = np.arange(1, degree + 2, dtype=float)
    values = lagrange_basis(nodes, t) @ np.polyval(coeffs, nodes)
    np.testing.assert_allclose(values, np.polyval(coeffs, t), atol=1e-10)


def test_basis_accepts_scalar():
    assert lagrange_basis(equidistant_nodes(2), 0.5).shape == (1, 3)


# ------------------- Tensor grids ------------------- #


def test_tensor_nodes_ordering():
    grid = tensor_nodes(np.array([0.0, 1.0]), 2)
    np.testing.assert_array_equal(grid, [[0, 0], [0, 1], [1, 0], [1, 1]])


def test_tensor_nodes_in_dimension_zero():
    assert tensor_nodes(equidistant_nodes(3), 0).shape == (1, 0)


def test_tensor_basis_is_partition_of_unity(rng):
    nodes = equidistant_nodes(2)
    points = rng.random((20, 3))
    basis = tensor_basis(nodes, points)
    assert basis.shape == (20, 27)
    np.testing.assert_allclose(basis.sum(axis=1), 1.0, atol=1e-12)


def test_tensor_basis_matches_grid_ordering():
    nodes = equidistant_nodes(2)
    grid = tensor_nodes(nodes, 2)
    np.testing.assert_allclose(tensor_basis(nodes, grid), np.eye(9), atol=1e-14)


def test_tensor_basis_reproduces_bilinear_function(rng):
    nodes = equidistant_nodes(1)
    grid = tensor_nodes(nodes, 2)
    func = lambda p: 1.0 + 2.0 * p[:, 0] - p[:, 1] + 3.0 * p[:, 0] * p[:, 1]
    points = rng.random((10, 2))
    np.testing.assert_allclose(tensor_basis(nodes, points) @ func(grid), func(points), atol=1e-12)
