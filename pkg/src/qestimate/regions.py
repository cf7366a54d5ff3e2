"""Integration regions and their classification of axis-aligned cells.

Every region answers three questions for the quadrature and the estimators:
which points it contains, where a point outside it projects to, and whether a
cell [lower, upper] lies inside, outside or across its boundary. Cell queries
are vectorized over a stack of cells of shape (C, d).
"""

from abc import ABC, abstractmethod
from enum import IntEnum
from typing import Sequence, Tuple

import numpy as np

from src.core.exceptions import RegionError

CONTAINS_SLACK = 1e-12


class CellClass(IntEnum):
    """Position of a closed cell relative to a region."""

    OUTSIDE = 0
    INSIDE = 1
    PARTIAL = 2


def _as_cells(lower, upper) -> Tuple[np.ndarray, np.ndarray]:
    return np.atleast_2d(np.asarray(lower, dtype=float)), np.atleast_2d(np.asarray(upper, dtype=float))


class Region(ABC):
    """A measurable subset of R^d."""

    dim: int

    @property
    @abstractmethod
    def bounds(self) -> Tuple[np.ndarray, np.ndarray]:
        """Lower and upper corners of a bounding box."""

    @abstractmethod
    def contains(self, points: np.ndarray) -> np.ndarray:
        """Boolean membership of points of shape (P, d)."""

    @abstractmethod
    def classify(self, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
        """CellClass codes of cells given by their corners, shape (C,)."""

    def project(self, points: np.ndarray) -> np.ndarray:
        """Map points to nearby points of the region. Identity by default."""
        return np.asarray(points, dtype=float)

    def __and__(self, other: "Region") -> "Region":
        return Intersection([self, other])

    def __invert__(self) -> "Region":
        return Complement(self)


class Box(Region):
    """Closed axis-aligned box [lower, upper].

    Examples:
        >>> box = Box([0.0, 0.0], [1.0, 1.0])
        >>> box.classify([[0.25, 0.25], [0.5, 0.5]], [[0.5, 0.5], [1.5, 1.5]]).tolist()
        [1, 2]
    """

    def __init__(self, lower: Sequence[float], upper: Sequence[float]):
        self.lower = np.asarray(lower, dtype=float).reshape(-1)
        self.upper = np.asarray(upper, dtype=float).reshape(-1)
        if self.lower.shape != self.upper.shape:
            raise RegionError("Box corners differ in dimension")
        if np.any(self.upper <= self.lower):
            raise RegionError(
                "Box has zero measure",
                details={"lower": self.lower.tolist(), "upper": self.upper.tolist()},
            )
        self.dim = int(self.lower.shape[0])

    @classmethod
    def unit(cls, d: int) -> "Box":
        return cls(np.zeros(d), np.ones(d))

    @property
    def bounds(self):
        return self.lower, self.upper

    @property
    def widths(self) -> np.ndarray:
        return self.upper - self.lower

    @property
    def diameter(self) -> float:
        return float(np.linalg.norm(self.widths))

    @property
    def volume(self) -> float:
        return float(np.prod(self.widths))

    def contains(self, points):
        points = np.atleast_2d(points)
        slack = CONTAINS_SLACK * np.maximum(1.0, np.abs(self.upper))
        return np.all((points >= self.lower - slack) & (points <= self.upper + slack), axis=1)

    def classify(self, lower, upper):
        lower, upper = _as_cells(lower, upper)
        inside = np.all((lower >= self.lower) & (upper <= self.upper), axis=1)
        outside = np.any((upper <= self.lower) | (lower >= self.upper), axis=1)
        return np.where(inside, CellClass.INSIDE, np.where(outside, CellClass.OUTSIDE, CellClass.PARTIAL))

    def project(self, points):
        return np.clip(points, self.lower, self.upper)

    def __repr__(self) -> str:
        return f"Box({self.lower.tolist()}, {self.upper.tolist()})"


class Ball(Region):
    """Closed Euclidean ball."""

    def __init__(self, center: Sequence[float], radius: float = 1.0):
        self.center = np.asarray(center, dtype=float).reshape(-1)
        self.radius = float(radius)
        if self.radius <= 0:
            raise RegionError("Ball has zero measure", details={"radius": self.radius})
        self.dim = int(self.center.shape[0])

    @property
    def bounds(self):
        return self.center - self.radius, self.center + self.radius

    def contains(self, points):
        points = np.atleast_2d(points)
        squared = ((points - self.center) ** 2).sum(axis=1)
        return squared <= self.radius**2 * (1.0 + CONTAINS_SLACK)

    def classify(self, lower, upper):
        lower, upper = _as_cells(lower, upper)
        nearest = np.clip(self.center, lower, upper) - self.center
        farthest = np.maximum(np.abs(lower - self.center), np.abs(upper - self.center))
        near = np.sqrt((nearest**2).sum(axis=1))
        far = np.sqrt((farthest**2).sum(axis=1))
        return np.where(
            far <= self.radius,
            CellClass.INSIDE,
            np.where(near >= self.radius, CellClass.OUTSIDE, CellClass.PARTIAL),
        )

    def project(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        offset = points - self.center
        norm = np.sqrt((offset**2).sum(axis=1, keepdims=True))
        factor = np.minimum(1.0, self.radius / np.where(norm > 0, norm, 1.0))
        return self.center + offset * factor

    def __repr__(self) -> str:
        return f"Ball({self.center.tolist()}, {self.radius})"


class Intersection(Region):
    """Intersection of regions; at least one part must be bounded."""

    def __init__(self, parts: Sequence[Region]):
        self.parts = list(parts)
        if not self.parts:
            raise RegionError("Empty intersection")
        dims = {part.dim for part in self.parts}
        if len(dims) != 1:
            raise RegionError("Intersected regions differ in dimension", details={"dims": sorted(dims)})
        self.dim = dims.pop()

    @property
    def bounds(self):
        boxes = []
        for part in self.parts:
            try:
                boxes.append(part.bounds)
            except RegionError:
                continue
        if not boxes:
            raise RegionError("Intersection of unbounded regions")
        lower = np.max([box[0] for box in boxes], axis=0)
        upper = np.min([box[1] for box in boxes], axis=0)
        return lower, upper

    def contains(self, points):
        result = np.ones(np.atleast_2d(points).shape[0], dtype=bool)
        for part in self.parts:
            result &= part.contains(points)
        return result

    def classify(self, lower, upper):
        codes = np.stack([part.classify(lower, upper) for part in self.parts])
        return np.where(
            np.any(codes == CellClass.OUTSIDE, axis=0),
            CellClass.OUTSIDE,
            np.where(np.all(codes == CellClass.INSIDE, axis=0), CellClass.INSIDE, CellClass.PARTIAL),
        )

    def project(self, points):
        points = np.asarray(points, dtype=float)
        for _ in range(50):
            for part in self.parts:
                points = part.project(points)
            if np.all(self.contains(points)):
                break
        return points


class Complement(Region):
    """Complement of a region. Unbounded; used inside an Intersection.

    Points are not moved by project: the bounded parts of the enclosing
    intersection do the projection.
    """

    def __init__(self, inner: Region):
        self.inner = inner
        self.dim = inner.dim

    @property
    def bounds(self):
        raise RegionError("A complement has no bounding box")

    def contains(self, points):
        # The boundary stays with the inner region
        return ~self.inner.contains(points)

    def classify(self, lower, upper):
        codes = np.asarray(self.inner.classify(lower, upper))
        return np.select(
            [codes == CellClass.INSIDE, codes == CellClass.OUTSIDE],
            [CellClass.OUTSIDE, CellClass.INSIDE],
            CellClass.PARTIAL,
        )


class UnionOfBoxes(Region):
    """Finite union of closed boxes, e.g. the slabs around a lower-dimensional set.

    A cell is classified inside when a single box contains it, so cells covered
    only jointly by several boxes are reported partial and subdivided.
    """

    def __init__(self, lowers: np.ndarray, uppers: np.ndarray):
        self.lowers = np.atleast_2d(np.asarray(lowers, dtype=float))
        self.uppers = np.atleast_2d(np.asarray(uppers, dtype=float))
        if self.lowers.shape != self.uppers.shape or self.lowers.shape[0] == 0:
            raise RegionError("Union of boxes needs matching, non-empty corner stacks")
        if np.any(self.uppers <= self.lowers):
            raise RegionError("Union contains a box of zero measure")
        self.dim = int(self.lowers.shape[1])

    @property
    def boxes(self):
        return [Box(lo, hi) for lo, hi in zip(self.lowers, self.uppers)]

    @property
    def bounds(self):
        return self.lowers.min(axis=0), self.uppers.max(axis=0)

    def contains(self, points):
        points = np.atleast_2d(points)[:, None, :]
        inside = (points >= self.lowers - CONTAINS_SLACK) & (points <= self.uppers + CONTAINS_SLACK)
        return np.any(np.all(inside, axis=2), axis=1)

    def classify(self, lower, upper):
        lower, upper = _as_cells(lower, upper)
        lo, hi = lower[:, None, :], upper[:, None, :]
        inside = np.any(np.all((lo >= self.lowers) & (hi <= self.uppers), axis=2), axis=1)
        outside = np.all(np.any((hi <= self.lowers) | (lo >= self.uppers), axis=2), axis=1)
        return np.where(inside, CellClass.INSIDE, np.where(outside, CellClass.OUTSIDE, CellClass.PARTIAL))

    def project(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        candidates = np.clip(points[:, None, :], self.lowers, self.uppers)
        distance = ((candidates - points[:, None, :]) ** 2).sum(axis=2)
        return candidates[np.arange(points.shape[0]), distance.argmin(axis=1)]
