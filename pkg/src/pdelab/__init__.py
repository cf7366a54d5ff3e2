"""Poisson problems on the unit disk and ball, solved on submanifolds through their Green functions."""

from src.pdelab.manifolds import ManifoldSpec, circle_manifold, domain_manifold, make_manifold, point_manifold
from src.pdelab.problems import EllipticProblem, ProblemRegistry, get_problem, green_kernel
from src.pdelab.rhs import RHSRegistry, RightHandSide, exact_solution, make_rhs
from src.pdelab.solver import ManifoldSolution, green_integral, green_representation_check, solve_on_manifold

__all__ = [
    "EllipticProblem",
    "ManifoldSolution",
    "ManifoldSpec",
    "ProblemRegistry",
    "RHSRegistry",
    "RightHandSide",
    "circle_manifold",
    "domain_manifold",
    "exact_solution",
    "get_problem",
    "green_integral",
    "green_kernel",
    "green_representation_check",
    "make_manifold",
    "make_rhs",
    "point_manifold",
    "solve_on_manifold",
]
