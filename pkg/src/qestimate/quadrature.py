"""Integrals of a weight over axis-aligned cells intersected with a region.

Regular cells get tensor Gauss-Legendre. Cells cut by the region boundary are
subdivided and finished with a masked rule. Cells near a singular point are
checked against their 2^d children. A cell that contains a singular point is
split at that point into corner boxes, and each corner box is mapped onto d
pyramids whose apex is the singular point:

    x = u (v_1, ..., 1, ..., v_{d-1}),  dx = u^(d-1) du dv

The radial variable u is graded geometrically towards 0 and the last interval
uses Gauss-Jacobi with the weight u^(d-1+min(sigma,0)).
"""

import logging
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from src.core.config import DEFAULT_QUADRATURE, QuadratureConfig
from src.core.lagrange import tensor_nodes
from src.qestimate.regions import CellClass, Region

logger = logging.getLogger(__name__)

Integrand = Callable[[np.ndarray], np.ndarray]

MAX_SPLITS = 40


@lru_cache(maxsize=None)
def gauss_legendre_unit(degree: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [0, 1]."""
    nodes, weights = roots_legendre(degree)
    return (nodes + 1.0) / 2.0, weights / 2.0


@lru_cache(maxsize=None)
def tensor_rule(d: int, degree: int) -> Tuple[np.ndarray, np.ndarray]:
    """Tensor Gauss-Legendre rule on [0, 1]^d; d = 0 gives the single empty node."""
    nodes, weights = gauss_legendre_unit(degree)
    return tensor_nodes(nodes, d), tensor_nodes(weights, d).prod(axis=1)


@lru_cache(maxsize=None)
def radial_rule(gamma: float, levels: int, degree: int) -> Tuple[np.ndarray, np.ndarray]:
    """Rule for int_0^1 phi(u) du with phi(u) ~ u^gamma near 0.

    Gauss-Legendre on [2^(-i-1), 2^(-i)] for i < levels, Gauss-Jacobi on
    [0, 2^(-levels)] with the singular factor moved into the weights.
    """
    nodes, weights = gauss_legendre_unit(degree)
    u_parts, w_parts = [], []
    for level in range(levels):
        a, b = 2.0 ** (-level - 1), 2.0**-level
        u_parts.append(a + (b - a) * nodes)
        w_parts.append((b - a) * weights)
    eps = 2.0**-levels
    x, w = roots_jacobi(degree, 0.0, gamma)
    u = eps * (1.0 + x) / 2.0
    u_parts.append(u)
    w_parts.append((eps / 2.0) ** (gamma + 1.0) * w / u**gamma)
    return np.concatenate(u_parts), np.concatenate(w_parts)


def child_cells(lower: np.ndarray, upper: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """The 2^d halves of a cell, as corner stacks."""
    mid = (lower + upper) / 2.0
    bits = tensor_nodes(np.array([0.0, 1.0]), lower.shape[0]).astype(bool)
    return np.where(bits, mid, lower), np.where(bits, upper, mid)


class CellIntegrator:
    """Integrates one weight over cells clipped to a region.

    Args:
        integrand: Vectorized weight, points (P, d) -> values (P,)
        d: Dimension
        region: Integration region, the whole cell when None
        singular_points: Points where the weight may blow up, shape (S, d)
        sigma: Order of the singularity, |x - p|^sigma (0 for logarithmic)
        config: Rule degrees, tolerances and depths
    """

    def __init__(
        self,
        integrand: Integrand,
        d: int,
        region: Optional[Region] = None,
        singular_points: Optional[np.ndarray] = None,
        sigma: float = 0.0,
        config: QuadratureConfig = DEFAULT_QUADRATURE,
    ):
        self.integrand = integrand
        self.d = d
        self.region = region
        self.config = config
        points = np.zeros((0, d)) if singular_points is None else np.atleast_2d(singular_points)
        self.singular_points = np.unique(points.reshape(-1, d), axis=0)
        self.gamma = d - 1 + min(sigma, 0.0)
        self.rule_points, self.rule_weights = tensor_rule(d, config.degree)
        self.is_complex = False

    # Evaluation

    def evaluate(self, points: np.ndarray, masked: bool = False) -> np.ndarray:
        values = np.asarray(self.integrand(points))
        if values.ndim == 0:
            values = np.full(points.shape[0], values)
        if np.iscomplexobj(values):
            self.is_complex = True
        if masked and self.region is not None:
            values = np.where(self.region.contains(points), values, 0.0)
        return values

    def gauss(self, lower: np.ndarray, upper: np.ndarray, masked: bool = False) -> np.ndarray:
        """Tensor Gauss-Legendre on a stack of cells."""
        widths = upper - lower
        points = lower[:, None, :] + self.rule_points[None, :, :] * widths[:, None, :]
        values = self.evaluate(points.reshape(-1, self.d), masked).reshape(lower.shape[0], -1)
        return (values @ self.rule_weights) * widths.prod(axis=1)

    def classify(self, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
        if self.region is None:
            return np.full(np.atleast_2d(lower).shape[0], CellClass.INSIDE)
        return np.asarray(self.region.classify(lower, upper))

    # Geometry

    def singular_mask(self, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
        """(C, S) flags: singular point s lies in closed cell c."""
        points = self.singular_points[None, :, :]
        return np.all((points >= lower[:, None, :]) & (points <= upper[:, None, :]), axis=2)

    def near_mask(self, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
        if self.singular_points.shape[0] == 0:
            return np.zeros(lower.shape[0], dtype=bool)
        points = self.singular_points[None, :, :]
        nearest = np.clip(points, lower[:, None, :], upper[:, None, :])
        distance = np.sqrt(((nearest - points) ** 2).sum(axis=2)).min(axis=1)
        diameter = np.sqrt(((upper - lower) ** 2).sum(axis=1))
        return distance <= self.config.near_factor * diameter

    # Recursive cases

    def integrate(
        self,
        lower: np.ndarray,
        upper: np.ndarray,
        code: int,
        partial_left: int,
        refine_left: int,
        splits_left: int = MAX_SPLITS,
    ):
        if code == CellClass.OUTSIDE:
            return 0.0
        inside = self.singular_mask(lower[None], upper[None])[0]
        if np.any(inside):
            return self.singular_cell(
                lower, upper, self.singular_points[inside], code, partial_left, splits_left
            )
        if code == CellClass.PARTIAL:
            if partial_left == 0:
                return self.gauss(lower[None], upper[None], masked=True)[0]
            return self.subdivide(lower, upper, partial_left - 1, refine_left)
        if refine_left > 0 and self.near_mask(lower[None], upper[None])[0]:
            coarse = self.gauss(lower[None], upper[None])[0]
            fine = self.gauss(*child_cells(lower, upper)).sum()
            if abs(fine - coarse) <= self.config.rel_tolerance * abs(fine) + self.config.abs_tolerance:
                return fine
            return self.subdivide(lower, upper, partial_left, refine_left - 1)
        return self.gauss(lower[None], upper[None])[0]

    def subdivide(self, lower, upper, partial_left: int, refine_left: int, splits_left: int = MAX_SPLITS):
        child_lower, child_upper = child_cells(lower, upper)
        codes = self.classify(child_lower, child_upper)
        return sum(
            self.integrate(lo, hi, code, partial_left, refine_left, splits_left)
            for lo, hi, code in zip(child_lower, child_upper, codes)
        )

    def singular_cell(self, lower, upper, points, code, partial_left, splits_left):
        if points.shape[0] > 1 and splits_left > 0:
            axis = int(np.argmax(upper - lower))
            mid = (lower[axis] + upper[axis]) / 2.0
            left_upper, right_lower = upper.copy(), lower.copy()
            left_upper[axis] = mid
            right_lower[axis] = mid
            halves = [(lower, left_upper), (right_lower, upper)]
            return sum(
                self.integrate(lo, hi, self.classify(lo, hi)[0], partial_left, 0, splits_left - 1)
                for lo, hi in halves
            )
        apex = points[0]
        total = 0.0
        bits = tensor_nodes(np.array([0.0, 1.0]), self.d).astype(bool)
        for corner in bits:
            box_lower = np.where(corner, apex, lower)
            box_upper = np.where(corner, upper, apex)
            if np.any(box_upper <= box_lower):
                continue
            box_code = self.classify(box_lower, box_upper)[0] if code != CellClass.INSIDE else code
            if box_code == CellClass.OUTSIDE:
                continue
            if box_code == CellClass.PARTIAL and partial_left > 0:
                total = total + self.subdivide(box_lower, box_upper, partial_left - 1, 0, splits_left)
                continue
            far = np.where(corner, box_upper, box_lower)
            total = total + self.pyramids(apex, far - apex, masked=box_code == CellClass.PARTIAL)
        return total

    def pyramids(self, apex: np.ndarray, edges: np.ndarray, masked: bool = False):
        """Integral over the box apex + edges * [0, 1]^d through d pyramid maps."""
        d = self.d
        u, u_weights = radial_rule(self.gamma, self.config.radial_levels, self.config.degree)
        v, v_weights = tensor_rule(d - 1, self.config.degree)
        faces = np.stack([np.insert(v, axis, 1.0, axis=1) for axis in range(d)])
        unit = u[None, :, None, None] * faces[:, None, :, :]
        points = apex + edges * unit.reshape(-1, d)
        values = self.evaluate(points, masked).reshape(d, u.shape[0], v.shape[0])
        radial = u_weights * u ** (d - 1)
        total = np.einsum("jab,a,b->", values, radial, v_weights)
        return total * abs(float(np.prod(edges)))


def cell_integrals(
    integrand: Integrand,
    lower: np.ndarray,
    upper: np.ndarray,
    region: Optional[Region] = None,
    singular_points: Optional[np.ndarray] = None,
    sigma: float = 0.0,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
) -> np.ndarray:
    """Integral of the weight over each cell intersected with the region.

    Args:
        integrand: Vectorized weight, points (P, d) -> values (P,)
        lower: Lower cell corners, shape (C, d)
        upper: Upper cell corners, shape (C, d)
        region: Integration region, whole cells when None
        singular_points: Points where the weight may be singular
        sigma: Singularity order, 0 for a logarithmic singularity

    Returns:
        Array of C cell integrals, complex only when the weight is
    """
    lower = np.atleast_2d(np.asarray(lower, dtype=float))
    upper = np.atleast_2d(np.asarray(upper, dtype=float))
    integrator = CellIntegrator(integrand, lower.shape[1], region, singular_points, sigma, config)
    codes = integrator.classify(lower, upper)
    special = (
        (codes == CellClass.PARTIAL)
        | np.any(integrator.singular_mask(lower, upper), axis=1)
        | integrator.near_mask(lower, upper)
    ) & (codes != CellClass.OUTSIDE)
    plain = (codes == CellClass.INSIDE) & ~special

    result = np.zeros(lower.shape[0], dtype=complex)
    if np.any(plain):
        result[plain] = integrator.gauss(lower[plain], upper[plain])
    for index in np.flatnonzero(special):
        result[index] = integrator.integrate(
            lower[index], upper[index], codes[index], config.partial_depth, config.max_depth
        )
    logger.debug(
        "Cell integrals: %s regular, %s special, %s outside",
        int(plain.sum()),
        int(special.sum()),
        int((codes == CellClass.OUTSIDE).sum()),
    )
    return result if integrator.is_complex else result.real
