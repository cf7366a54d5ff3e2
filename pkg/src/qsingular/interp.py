"""Dyadic piecewise tensor-Lagrange interpolation on Q1 = [0,1]^d1.

Level l cuts Q1 into 2^(d1 l) closed cubes of side 2^-l. Each cube carries the
equidistant nodes of degree q = max(s-1, 1), so the level-l mesh has size
2^-l / q, and the level-(l+1) nodes inside a cube are the fine nodes used by
the two-level difference operator P_hat - P.

Cubes and nodes are C-ordered multi-indices. Fine nodes of a cube sit at j/(2q)
in local coordinates and contain the coarse nodes at the even positions.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from src.core.exceptions import InputError
from src.core.lagrange import equidistant_nodes, tensor_basis, tensor_nodes

logger = logging.getLogger(__name__)


def cube_multi_indices(d1: int, level: int) -> np.ndarray:
    """Multi-indices of the 2^(d1 level) cubes, shape (n, d1)."""
    return tensor_nodes(np.arange(2**level), d1).astype(np.int64)


def flat_cube_index(multi: np.ndarray, level: int) -> np.ndarray:
    """C-ordered flat index of cube multi-indices."""
    multi = np.atleast_2d(multi)
    weights = (2**level) ** np.arange(multi.shape[1] - 1, -1, -1)
    return multi @ weights


def locate(points: np.ndarray, level: int) -> Tuple[np.ndarray, np.ndarray]:
    """Cube multi-index and local coordinates of points in [0,1]^d1."""
    scaled = np.asarray(points, dtype=float) * 2**level
    multi = np.clip(np.floor(scaled), 0, 2**level - 1).astype(np.int64)
    return multi, scaled - multi


@dataclass
class PiecewisePolynomial:
    """Function on [0,1]^d1 that is a tensor polynomial on each cube of a level.

    Coefficients are nodal values, one row per cube, so neighbouring cubes may
    disagree on shared faces.

    Args:
        d1: Dimension of the parameter cube
        level: Cube level
        degree: Coordinate degree on each cube
        coeffs: Nodal values, shape (2^(d1 level), (degree+1)^d1)
    """

    d1: int
    level: int
    degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs)
        expected = (2 ** (self.d1 * self.level), (self.degree + 1) ** self.d1)
        if self.coeffs.shape != expected:
            raise InputError(
                "Coefficient array does not match the cube level",
                details={"expected": expected, "got": self.coeffs.shape},
            )

    @classmethod
    def zeros(cls, d1: int, level: int, degree: int, dtype=float) -> "PiecewisePolynomial":
        shape = (2 ** (d1 * level), (degree + 1) ** d1)
        return cls(d1, level, degree, np.zeros(shape, dtype=dtype))

    @classmethod
    def constant(cls, value, d1: int = 0) -> "PiecewisePolynomial":
        return cls(d1, 0, 1, np.full((1, 2**d1), value))

    @classmethod
    def from_function(
        cls, func: Callable[[np.ndarray], np.ndarray], d1: int, level: int, degree: int
    ) -> "PiecewisePolynomial":
        """Nodal interpolant of a vectorized function."""
        shell = cls.zeros(d1, level, degree)
        points = shell.nodal_points().reshape(-1, d1)
        values = np.asarray(func(points)).reshape(shell.coeffs.shape)
        return cls(d1, level, degree, values)

    @classmethod
    def from_grid_values(cls, values: np.ndarray, d1: int, level: int, degree: int) -> "PiecewisePolynomial":
        """Interpolant of data given on the global grid of the level."""
        per_axis = 2**level * degree + 1
        grid = np.asarray(values).reshape((per_axis,) * d1)
        multi = cube_multi_indices(d1, level)
        local = tensor_nodes(np.arange(degree + 1), d1).astype(np.int64)
        index = multi[:, None, :] * degree + local[None, :, :]
        coeffs = grid[tuple(index[..., axis] for axis in range(d1))]
        return cls(d1, level, degree, coeffs)

    @property
    def ref_nodes(self) -> np.ndarray:
        return equidistant_nodes(self.degree)

    @property
    def n_cubes(self) -> int:
        return self.coeffs.shape[0]

    def nodal_points(self) -> np.ndarray:
        """Nodes of every cube, shape (n_cubes, K, d1)."""
        multi = cube_multi_indices(self.d1, self.level)
        local = tensor_nodes(self.ref_nodes, self.d1)
        return (multi[:, None, :] + local[None, :, :]) / 2**self.level

    def grid_points(self) -> np.ndarray:
        """The global grid of the level, mesh 2^-level / degree."""
        axis = np.linspace(0.0, 1.0, 2**self.level * self.degree + 1)
        return tensor_nodes(axis, self.d1)

    def evaluate_in(self, cubes: np.ndarray, local: np.ndarray) -> np.ndarray:
        """Values at local coordinates inside given (flat) cubes."""
        basis = tensor_basis(self.ref_nodes, local)
        return np.einsum("pk,pk->p", basis, self.coeffs[cubes])

    def __call__(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        if self.d1 == 0:
            count = points.shape[0] if points.ndim == 2 else 1
            return np.full(count, self.coeffs[0, 0])
        points = points.reshape(-1, self.d1)
        multi, local = locate(points, self.level)
        return self.evaluate_in(flat_cube_index(multi, self.level), local)

    def refined(self, level: int) -> "PiecewisePolynomial":
        """The same function written on a finer level."""
        if level < self.level:
            raise InputError("Cannot coarsen a piecewise polynomial", details={"level": level})
        if level == self.level or self.d1 == 0:
            return PiecewisePolynomial(self.d1, level if self.d1 else 0, self.degree, self.coeffs.copy())
        ratio = 2 ** (level - self.level)
        fine = cube_multi_indices(self.d1, level)
        parent = fine // ratio
        local_nodes = tensor_nodes(self.ref_nodes, self.d1)
        local = ((fine - parent * ratio)[:, None, :] + local_nodes[None, :, :]) / ratio
        cubes = np.repeat(flat_cube_index(parent, self.level), local_nodes.shape[0])
        values = self.evaluate_in(cubes, local.reshape(-1, self.d1))
        return PiecewisePolynomial(self.d1, level, self.degree, values.reshape(fine.shape[0], -1))

    def _aligned(self, other: "PiecewisePolynomial"):
        if other.d1 != self.d1 or other.degree != self.degree:
            raise InputError(
                "Piecewise polynomials differ in dimension or degree",
                details={"left": (self.d1, self.degree), "right": (other.d1, other.degree)},
            )
        level = max(self.level, other.level)
        return self.refined(level), other.refined(level)

    def __add__(self, other):
        if isinstance(other, PiecewisePolynomial):
            left, right = self._aligned(other)
            return PiecewisePolynomial(self.d1, left.level, self.degree, left.coeffs + right.coeffs)
        return PiecewisePolynomial(self.d1, self.level, self.degree, self.coeffs + other)

    __radd__ = __add__

    def __neg__(self):
        return PiecewisePolynomial(self.d1, self.level, self.degree, -self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        return PiecewisePolynomial(self.d1, self.level, self.degree, self.coeffs * scalar)

    __rmul__ = __mul__

    def sup_distance(self, reference: Callable[[np.ndarray], np.ndarray], factor: int = 4) -> float:
        """Max |self - reference| on a grid `factor` times finer than the level grid."""
        per_axis = factor * 2**self.level * self.degree + 1
        probe = tensor_nodes(np.linspace(0.0, 1.0, per_axis), self.d1)
        return float(np.max(np.abs(self(probe) - np.asarray(reference(probe)))))


class DyadicInterp:
    """Cubes, nodes and interpolation operators of one level.

    Args:
        d1: Dimension of Q1, at least 1
        level: Level l; cubes have side 2^-l
        degree: Coordinate degree q of the Lagrange interpolation

    Examples:
        >>> interp = DyadicInterp(d1=1, level=2, degree=1)
        >>> interp.n_cubes, interp.child_nodes(1).ravel().tolist()
        (4, [0.25, 0.375, 0.5])
    """

    def __init__(self, d1: int, level: int, degree: int):
        if d1 < 1:
            raise InputError("Dyadic interpolation needs d1 >= 1", details={"d1": d1})
        if level < 0 or degree < 1:
            raise InputError(
                "Level must be nonnegative and degree positive",
                details={"level": level, "degree": degree},
            )
        self.d1 = d1
        self.level = level
        self.degree = degree
        self.ref_nodes = equidistant_nodes(degree)
        self.fine_ref_nodes = equidistant_nodes(2 * degree)
        self._multi = cube_multi_indices(d1, level)

    @property
    def n_cubes(self) -> int:
        return self._multi.shape[0]

    @property
    def side(self) -> float:
        return 2.0**-self.level

    @property
    def radius(self) -> float:
        """rho_l = sqrt(d1) 2^(-l-1), half the cube diagonal."""
        return np.sqrt(self.d1) * 2.0 ** (-self.level - 1)

    @property
    def n_local(self) -> int:
        return (self.degree + 1) ** self.d1

    @property
    def n_fine(self) -> int:
        return (2 * self.degree + 1) ** self.d1

    def cubes(self) -> Tuple[np.ndarray, np.ndarray]:
        """Lower and upper corners of all cubes."""
        lower = self._multi * self.side
        return lower, lower + self.side

    def center(self, i: int) -> np.ndarray:
        return (self._multi[i] + 0.5) * self.side

    def grid_points(self) -> np.ndarray:
        """Gamma_l, the global mesh of size 2^-l / degree."""
        return tensor_nodes(np.linspace(0.0, 1.0, 2**self.level * self.degree + 1), self.d1)

    def local_nodes(self, i: int) -> np.ndarray:
        """Gamma_li, the coarse nodes of cube i."""
        return (self._multi[i] + tensor_nodes(self.ref_nodes, self.d1)) * self.side

    def child_nodes(self, i: int) -> np.ndarray:
        """Gamma_hat_li, the level l+1 nodes inside cube i."""
        return (self._multi[i] + tensor_nodes(self.fine_ref_nodes, self.d1)) * self.side

    def coarse_positions(self) -> np.ndarray:
        """Positions of the coarse nodes among the fine nodes of a cube."""
        multi = tensor_nodes(2 * np.arange(self.degree + 1), self.d1).astype(np.int64)
        weights = (2 * self.degree + 1) ** np.arange(self.d1 - 1, -1, -1)
        return multi @ weights

    def restriction(self) -> np.ndarray:
        """Selection of coarse-node data from fine-node data, shape (K, F)."""
        matrix = np.zeros((self.n_local, self.n_fine))
        matrix[np.arange(self.n_local), self.coarse_positions()] = 1.0
        return matrix

    def prolongation(self) -> np.ndarray:
        """Coarse interpolant evaluated at the fine nodes, shape (F, K)."""
        return tensor_basis(self.ref_nodes, tensor_nodes(self.fine_ref_nodes, self.d1))

    def difference_operator(self) -> np.ndarray:
        """(P_hat - P) acting on fine-node data, read back at the fine nodes.

        The matrix is I - prolongation @ restriction and is idempotent.
        """
        return np.eye(self.n_fine) - self.prolongation() @ self.restriction()

    def coarse_basis(self, local: np.ndarray) -> np.ndarray:
        """Basis of P_li at local coordinates, shape (P, K)."""
        return tensor_basis(self.ref_nodes, local)

    def hat_basis(self, local: np.ndarray) -> np.ndarray:
        """Basis of P_hat_li at local coordinates, shape (P, F)."""
        local = np.atleast_2d(np.asarray(local, dtype=float))
        child = np.clip(np.floor(2.0 * local), 0, 1).astype(np.int64)
        child_basis = tensor_basis(self.ref_nodes, 2.0 * local - child)
        offsets = tensor_nodes(np.arange(self.degree + 1), self.d1).astype(np.int64)
        fine_multi = child[:, None, :] * self.degree + offsets[None, :, :]
        weights = (2 * self.degree + 1) ** np.arange(self.d1 - 1, -1, -1)
        columns = fine_multi @ weights
        result = np.zeros((local.shape[0], self.n_fine))
        np.put_along_axis(result, columns, child_basis, axis=1)
        return result

    def subcube_offsets(self, level: int) -> np.ndarray:
        if level < self.level:
            raise InputError(
                "Target level is coarser than the interpolation level",
                details={"level": level, "interp_level": self.level},
            )
        return cube_multi_indices(self.d1, level - self.level)

    def subcube_indices(self, i: int, level: int) -> np.ndarray:
        """Flat level-`level` indices of the subcubes of cube i."""
        ratio = 2 ** (level - self.level)
        multi = self._multi[i] * ratio + self.subcube_offsets(level)
        return flat_cube_index(multi, level)

    def _subcube_local_nodes(self, level: int) -> np.ndarray:
        ratio = 2 ** (level - self.level)
        offsets = self.subcube_offsets(level)
        local = (offsets[:, None, :] + tensor_nodes(self.ref_nodes, self.d1)[None, :, :]) / ratio
        return local.reshape(-1, self.d1)

    def coarse_embedding(self, level: int) -> np.ndarray:
        """Map from Gamma_li data to nodal values of the level subcubes, shape (S K, K)."""
        return self.coarse_basis(self._subcube_local_nodes(level))

    def hat_embedding(self, level: int) -> np.ndarray:
        """Map from Gamma_hat_li data to nodal values of the level subcubes, shape (S K, F)."""
        return self.hat_basis(self._subcube_local_nodes(level))

    def lebesgue_constant(self, points_per_axis: int = 0) -> float:
        """Norm of P_li from l_inf(Gamma_li) to C(Q_li), measured on a probe grid.

        The default grid is four times finer than the node spacing.
        """
        per_axis = points_per_axis or 4 * self.degree + 1
        probe = tensor_nodes(np.linspace(0.0, 1.0, per_axis), self.d1)
        return float(np.abs(self.coarse_basis(probe)).sum(axis=1).max())
