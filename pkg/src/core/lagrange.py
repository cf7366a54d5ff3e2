"""Tensor-product Lagrange interpolation on equidistant reference nodes.

Node sets and basis values use the same C-ordered flattening, so a multi-index
(j_1, ..., j_d) maps to j_1 * K^(d-1) + ... + j_d for K nodes per axis.
"""

import numpy as np


def equidistant_nodes(degree: int) -> np.ndarray:
    """Reference nodes j/degree on [0, 1]."""
    return np.linspace(0.0, 1.0, degree + 1)


def lagrange_basis(nodes: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Values of the 1D Lagrange basis at t, shape (len(t), len(nodes))."""
    nodes = np.asarray(nodes, dtype=float)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    diff = t[:, None] - nodes[None, :]
    basis = np.ones((t.shape[0], nodes.shape[0]))
    for j, node in enumerate(nodes):
        for m, other in enumerate(nodes):
            if m != j:
                basis[:, j] *= diff[:, m] / (node - other)
    return basis


def tensor_nodes(nodes: np.ndarray, d: int) -> np.ndarray:
    """Tensor grid of 1D nodes, shape (K^d, d)."""
    if d == 0:
        return np.zeros((1, 0))
    mesh = np.meshgrid(*([np.asarray(nodes, dtype=float)] * d), indexing="ij")
    return np.stack(mesh, axis=-1).reshape(-1, d)


def tensor_basis(nodes: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Tensor Lagrange basis at points in reference coordinates, shape (P, K^d)."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    result = np.ones((points.shape[0], 1))
    for axis in range(points.shape[1]):
        axis_basis = lagrange_basis(nodes, points[:, axis])
        result = (result[:, :, None] * axis_basis[:, None, :]).reshape(
            points.shape[0], -1
        )
    return result
