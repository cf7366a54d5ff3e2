"""Submanifolds M of the domain on which the solution is requested.

Every manifold is given by a single chart from Q1 = [0,1]^d1 into R^d and a
finite probe grid of chart parameters used for error measurement.
"""

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from src.core.exceptions import InputError
from src.core.lagrange import tensor_nodes

logger = logging.getLogger(__name__)

Chart = Callable[[np.ndarray], np.ndarray]

DEFAULT_CURVE_PROBES = 33
DEFAULT_DOMAIN_PROBES = 9


@dataclass(frozen=True)
class ManifoldSpec:
    """A d1-dimensional submanifold with its chart and probe grid.

    Args:
        name: Label used in records and logs
        d1: Dimension of M; 0 for a point, d for the whole domain
        d: Dimension of the ambient domain
        chart: Map from parameters (P, d1) to points (P, d)
        chart_lipschitz: Lipschitz constant of the chart
        probe_params: Chart parameters of the probe grid, shape (P, d1)
    """

    name: str
    d1: int
    d: int
    chart: Chart
    chart_lipschitz: float
    probe_params: np.ndarray

    def __post_init__(self):
        if not 0 <= self.d1 <= self.d:
            raise InputError("Manifold needs 0 <= d1 <= d", details={"d1": self.d1, "d": self.d})
        object.__setattr__(self, "probe_params", self._as_params(self.probe_params))

    def _as_params(self, params) -> np.ndarray:
        params = np.asarray(params, dtype=float)
        if self.d1 == 0:
            return np.zeros((params.shape[0] if params.ndim == 2 else 1, 0))
        return params.reshape(-1, self.d1)

    def __call__(self, params) -> np.ndarray:
        params = self._as_params(params)
        return np.asarray(self.chart(params), dtype=float).reshape(-1, self.d)

    @property
    def probe_points(self) -> np.ndarray:
        """The probe grid as points of the domain."""
        return self(self.probe_params)


def point_manifold(x) -> ManifoldSpec:
    """M = {x} for an inner point x of the unit ball."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if float(np.linalg.norm(x)) >= 1.0:
        raise InputError("The point must lie inside the unit ball", details={"x": x.tolist()})

    def chart(params: np.ndarray) -> np.ndarray:
        return np.tile(x, (params.shape[0], 1))

    return ManifoldSpec(
        name="point", d1=0, d=x.shape[0], chart=chart, chart_lipschitz=1.0, probe_params=np.zeros((1, 0))
    )


def circle_manifold(radius: float = 0.5, probes: int = DEFAULT_CURVE_PROBES) -> ManifoldSpec:
    """The circle of the given radius in the unit disk, t -> radius (cos 2 pi t, sin 2 pi t)."""
    if not 0.0 < radius < 1.0:
        raise InputError("Circle radius must lie in (0, 1)", details={"radius": radius})
    if probes < 2:
        raise InputError("Need at least two probe points", details={"probes": probes})

    def chart(params: np.ndarray) -> np.ndarray:
        angle = 2.0 * np.pi * params[:, 0]
        return radius * np.stack([np.cos(angle), np.sin(angle)], axis=1)

    return ManifoldSpec(
        name="circle",
        d1=1,
        d=2,
        chart=chart,
        chart_lipschitz=2.0 * np.pi * radius,
        probe_params=np.linspace(0.0, 1.0, probes)[:, None],
    )


def domain_manifold(d: int, probes_per_axis: int = DEFAULT_DOMAIN_PROBES) -> ManifoldSpec:
    """M = Q through the bounding-box chart x -> 2x - 1; probes inside the closed ball."""
    if d < 1:
        raise InputError("Dimension must be positive", details={"d": d})

    def chart(params: np.ndarray) -> np.ndarray:
        return 2.0 * params - 1.0

    params = tensor_nodes(np.linspace(0.0, 1.0, probes_per_axis), d)
    inside = (((2.0 * params - 1.0) ** 2).sum(axis=1)) <= 1.0 + 1e-12
    logger.debug("Domain probe grid: %s of %s points inside", int(inside.sum()), params.shape[0])
    return ManifoldSpec(
        name="domain", d1=d, d=d, chart=chart, chart_lipschitz=2.0, probe_params=params[inside]
    )


def make_manifold(name: str, d: int, size: float = 0.5) -> ManifoldSpec:
    """Build a manifold from its config name; size is the circle radius.

    Raises:
        InputError: If the name is unknown or the circle is requested outside d = 2
    """
    if name == "point":
        return point_manifold(np.zeros(d))
    if name == "circle":
        if d != 2:
            raise InputError("The circle manifold needs d = 2", details={"d": d})
        return circle_manifold(size)
    if name == "domain":
        return domain_manifold(d)
    raise InputError(f"Unknown manifold: {name}", details={"manifold": name})
