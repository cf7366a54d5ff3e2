"""Manufactured right-hand sides: each family fixes u, and f = -Laplace u is derived symbolically.

Every registered family is a function from the coordinate symbols to the exact
solution u, which vanishes on the unit sphere. The C^r norm of f over the
bounding box [-1, 1]^d is measured on a grid from the symbolic derivatives and
used to scale f into the unit ball of C^r.
"""

import logging
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Callable, Sequence

import numpy as np
import sympy as sp

from src.core.exceptions import InputError
from src.core.lagrange import tensor_nodes
from src.core.registry import Registry
from src.pdelab.problems import get_problem

logger = logging.getLogger(__name__)

PointFunction = Callable[[np.ndarray], np.ndarray]

BOUND_PROBES_PER_AXIS = 17


class RHSRegistry(Registry):
    """Manufactured solution families by string id."""

    kind = "right-hand side family"


def _radius_squared(x: Sequence[sp.Symbol]) -> sp.Expr:
    return sum(xi**2 for xi in x)


@RHSRegistry.register("constant")
def constant_family(x: Sequence[sp.Symbol]) -> sp.Expr:
    """u = (1 - |x|^2) / (2d), so f = 1."""
    return (1 - _radius_squared(x)) / (2 * len(x))


@RHSRegistry.register("bubble")
def bubble_family(x: Sequence[sp.Symbol]) -> sp.Expr:
    """u = (1 - |x|^2)^2."""
    return (1 - _radius_squared(x)) ** 2


@RHSRegistry.register("zero")
def zero_family(x: Sequence[sp.Symbol]) -> sp.Expr:
    return sp.Integer(0)


def vectorize(expr: sp.Expr, symbols: Sequence[sp.Symbol]) -> PointFunction:
    """numpy callable of an expression, points (P, d) -> values (P,)."""
    func = sp.lambdify(symbols, expr, "numpy")

    def evaluate(points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        values = func(*points.T)
        return np.array(np.broadcast_to(values, (points.shape[0],)), dtype=float)

    return evaluate


def laplacian(expr: sp.Expr, symbols: Sequence[sp.Symbol]) -> sp.Expr:
    return sum(sp.diff(expr, xi, 2) for xi in symbols)


def cr_norm(expr: sp.Expr, symbols: Sequence[sp.Symbol], r: int, probes_per_axis: int = BOUND_PROBES_PER_AXIS) -> float:
    """max over |a| <= r of sup |d^a expr| on a grid of [-1, 1]^d."""
    grid = tensor_nodes(np.linspace(-1.0, 1.0, probes_per_axis), len(symbols))
    norm = 0.0
    for order in range(r + 1):
        for axes in combinations_with_replacement(symbols, order):
            derivative = sp.diff(expr, *axes) if axes else expr
            norm = max(norm, float(np.max(np.abs(vectorize(derivative, symbols)(grid)))))
    return norm


@dataclass(frozen=True)
class RightHandSide:
    """A manufactured right-hand side with its exact solution.

    Args:
        family: Registry id
        d: Dimension
        r: Smoothness order the norm bound refers to
        u_expr: Exact solution
        f_expr: -Laplace u
        norm_bound: ||f||_{C^r} on [-1, 1]^d, measured on a grid
    """

    family: str
    d: int
    r: int
    u_expr: sp.Expr
    f_expr: sp.Expr
    norm_bound: float

    @property
    def symbols(self):
        return sp.symbols(f"x0:{self.d}", real=True)

    def f(self, points) -> np.ndarray:
        return vectorize(self.f_expr, self.symbols)(points)

    def exact(self, points) -> np.ndarray:
        return vectorize(self.u_expr, self.symbols)(points)

    @property
    def scale(self) -> float:
        """Factor c with ||f / c||_{C^r} <= 1; 1 for f = 0."""
        return self.norm_bound if self.norm_bound > 0 else 1.0

    def scaled(self) -> PointFunction:
        """f / scale as a vectorized oracle."""
        evaluate = vectorize(self.f_expr / self.scale, self.symbols)
        return evaluate


def make_rhs(family: str, d: int, r: int = 1) -> RightHandSide:
    """Derive f and its C^r bound for a registered family.

    Raises:
        UnregisteredProblemError: If the family is unknown
        InputError: If r is negative

    Examples:
        >>> rhs = make_rhs("bubble", d=2, r=0)
        >>> rhs.f_expr
        -16*x0**2 - 16*x1**2 + 8
        >>> rhs.norm_bound
        24.0
    """
    if r < 0:
        raise InputError("Smoothness r must be nonnegative", details={"r": r})
    factory = RHSRegistry.get(family)
    symbols = sp.symbols(f"x0:{d}", real=True)
    u_expr = sp.expand(factory(symbols))
    f_expr = sp.expand(-laplacian(u_expr, symbols))
    norm = cr_norm(f_expr, symbols, r)
    logger.debug("Right-hand side %s in d=%s: f = %s, C^%s bound %.4g", family, d, f_expr, r, norm)
    return RightHandSide(family=family, d=d, r=r, u_expr=u_expr, f_expr=f_expr, norm_bound=norm)


def exact_solution(problem, family: str, x) -> np.ndarray:
    """Closed-form u at points x of shape (P, d) for a registered family.

    Raises:
        UnregisteredProblemError: If the problem or the family is unknown

    Examples:
        >>> exact_solution("poisson-disk", "constant", [[0.5, 0.0]]).tolist()
        [0.1875]
    """
    d = get_problem(problem).d
    factory = RHSRegistry.get(family)
    symbols = sp.symbols(f"x0:{d}", real=True)
    return vectorize(sp.expand(factory(symbols)), symbols)(x)
