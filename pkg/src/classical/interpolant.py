"""Deterministic piecewise tensor-Lagrange approximation of C^r inputs.

A box is cut into c_1 x ... x c_d cells and every cell carries the equidistant
degree-r nodes, so the sample grid has prod(c_a r + 1) points shared between
neighbouring cells. For f in C^r the sup error decays like the cell side to the
power r + 1, and at least like n1^(-r/d).
"""

import logging
from dataclasses import dataclass
from math import floor
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.core.exceptions import InputError
from src.core.lagrange import equidistant_nodes, tensor_basis, tensor_nodes
from src.qestimate.integration import PointFunction
from src.qestimate.regions import Box, UnionOfBoxes

logger = logging.getLogger(__name__)

PROBE_FACTOR = 4


@dataclass
class DetInterpolant:
    """Piecewise tensor-Lagrange interpolant on a box.

    Args:
        box: The box carrying the grid
        degree: Coordinate degree r on each cell
        cells: Cells per axis
        values: Samples on the global grid, shape (c_1 r + 1, ..., c_d r + 1)
    """

    box: Box
    degree: int
    cells: Tuple[int, ...]
    values: np.ndarray

    def __post_init__(self):
        self.cells = tuple(int(c) for c in self.cells)
        expected = tuple(c * self.degree + 1 for c in self.cells)
        self.values = np.asarray(self.values).reshape(expected)

    @classmethod
    def sample(
        cls, f_oracle: PointFunction, box: Box, degree: int, cells: Sequence[int]
    ) -> "DetInterpolant":
        """Evaluate f on the grid of the given cell counts."""
        if degree < 1:
            raise InputError("Interpolation degree must be positive", details={"degree": degree})
        if len(cells) != box.dim or min(cells) < 1:
            raise InputError("Need a positive cell count per axis", details={"cells": list(cells)})
        axes = [np.linspace(lo, hi, c * degree + 1) for lo, hi, c in zip(box.lower, box.upper, cells)]
        mesh = np.meshgrid(*axes, indexing="ij")
        points = np.stack([axis.ravel() for axis in mesh], axis=1)
        values = np.asarray(f_oracle(points))
        if values.ndim == 0:
            values = np.full(points.shape[0], values[()])
        return cls(box, degree, tuple(cells), values)

    @property
    def d(self) -> int:
        return self.box.dim

    @property
    def sample_count(self) -> int:
        """Number of point evaluations of f."""
        return int(self.values.size)

    @property
    def cell_widths(self) -> np.ndarray:
        return self.box.widths / np.asarray(self.cells)

    def cell_corners(self) -> Tuple[np.ndarray, np.ndarray]:
        """Lower and upper corners of all cells, C-ordered."""
        multi = np.stack(
            np.meshgrid(*[np.arange(c) for c in self.cells], indexing="ij"), axis=-1
        ).reshape(-1, self.d)
        lower = self.box.lower + multi * self.cell_widths
        return lower, lower + self.cell_widths

    def __call__(self, points) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        scaled = (points - self.box.lower) / self.cell_widths
        cells = np.asarray(self.cells)
        multi = np.clip(np.floor(scaled), 0, cells - 1).astype(np.int64)
        local = scaled - multi
        basis = tensor_basis(equidistant_nodes(self.degree), local)
        offsets = tensor_nodes(np.arange(self.degree + 1), self.d).astype(np.int64)
        index = multi[:, None, :] * self.degree + offsets[None, :, :]
        nodal = self.values[tuple(index[..., axis] for axis in range(self.d))]
        return np.einsum("pk,pk->p", basis, nodal)

    def probe_points(self, factor: int = PROBE_FACTOR) -> np.ndarray:
        """Grid `factor` times finer than the sample grid."""
        axes = [
            np.linspace(lo, hi, factor * c * self.degree + 1)
            for lo, hi, c in zip(self.box.lower, self.box.upper, self.cells)
        ]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([axis.ravel() for axis in mesh], axis=1)

    def sup_error(self, f_oracle: PointFunction, factor: int = PROBE_FACTOR) -> float:
        """Max |f - Pf| on the probe grid."""
        probe = self.probe_points(factor)
        values = np.broadcast_to(np.asarray(f_oracle(probe)), (probe.shape[0],))
        return float(np.max(np.abs(values - self(probe))))


def cells_for_budget(n1: int, degree: int, d: int) -> int:
    """Largest c with (c r + 1)^d <= n1, at least 1."""
    per_axis = n1 ** (1.0 / d)
    return max(1, floor((per_axis - 1.0) / degree + 1e-9))


def det_interp(
    f_oracle: PointFunction, r: int, d: int, n1: int, box: Optional[Box] = None
) -> DetInterpolant:
    """Degree-r interpolant from at most n1 point values on a box, the unit cube by default.

    Raises:
        InputError: If n1 < (r+1)^d

    Examples:
        >>> P = det_interp(lambda x: x.sum(axis=1), r=1, d=2, n1=16)
        >>> P.cells, P.sample_count, round(float(P([[0.3, 0.4]])[0]), 12)
        ((3, 3), 16, 0.7)
    """
    if r < 1:
        raise InputError("Smoothness r must be at least 1", details={"r": r})
    if n1 < (r + 1) ** d:
        raise InputError(
            "Budget too small for one interpolation cell",
            details={"n1": n1, "needed": (r + 1) ** d},
        )
    box = Box.unit(d) if box is None else box
    c = cells_for_budget(n1, r, d)
    interpolant = DetInterpolant.sample(f_oracle, box, r, (c,) * d)
    logger.debug("Deterministic interpolant: %s cells per axis, %s samples", c, interpolant.sample_count)
    return interpolant


@dataclass
class BoxUnionInterpolant:
    """Interpolants on the boxes of a union; zero outside the union."""

    region: UnionOfBoxes
    parts: List[DetInterpolant]

    @property
    def sample_count(self) -> int:
        return sum(part.sample_count for part in self.parts)

    def cell_corners(self) -> Tuple[np.ndarray, np.ndarray]:
        corners = [part.cell_corners() for part in self.parts]
        return np.vstack([lo for lo, _ in corners]), np.vstack([hi for _, hi in corners])

    def __call__(self, points) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        result = np.zeros(points.shape[0])
        pending = np.ones(points.shape[0], dtype=bool)
        for part in self.parts:
            hit = pending & part.box.contains(points)
            if np.any(hit):
                result[hit] = part(points[hit])
                pending &= ~hit
        return result

    def sup_error(self, f_oracle: PointFunction, factor: int = PROBE_FACTOR) -> float:
        return max(part.sup_error(f_oracle, factor) for part in self.parts)


def det_interp_on_boxes(
    f_oracle: PointFunction, r: int, region: UnionOfBoxes, cell_side: float
) -> BoxUnionInterpolant:
    """Degree-r interpolants on every box of a union with cells of side about cell_side."""
    if cell_side <= 0:
        raise InputError("Cell side must be positive", details={"cell_side": cell_side})
    parts = []
    for box in region.boxes:
        cells = [max(1, int(round(width / cell_side))) for width in box.widths]
        parts.append(DetInterpolant.sample(f_oracle, box, r, cells))
    interpolant = BoxUnionInterpolant(region, parts)
    logger.debug(
        "Box-union interpolant: %s boxes, %s samples", len(parts), interpolant.sample_count
    )
    return interpolant


def residual_scale(
    f_oracle: PointFunction, interpolant, region=None, factor: int = PROBE_FACTOR
) -> float:
    """Sup of |f - Pf| on the interpolant's probe grid, restricted to a region."""
    probes = (
        [part.probe_points(factor) for part in interpolant.parts]
        if isinstance(interpolant, BoxUnionInterpolant)
        else [interpolant.probe_points(factor)]
    )
    sup = 0.0
    for probe in probes:
        if region is not None:
            probe = probe[region.contains(probe)]
        if probe.shape[0] == 0:
            continue
        values = np.broadcast_to(np.asarray(f_oracle(probe)), (probe.shape[0],))
        sup = max(sup, float(np.max(np.abs(values - interpolant(probe)))))
    return sup
