"""Multilevel approximation of weakly singular integral operators T_k f."""

from src.qsingular.interp import DyadicInterp, PiecewisePolynomial
from src.qsingular.kernel import Kernel, constant_kernel, power_kernel, smooth_kernel
from src.qsingular.multilevel import (
    OperatorEstimate,
    far_field_norms,
    interpolate_operator,
    multilevel_apply,
    multilevel_estimator,
    near_field_norms,
    operator_reference,
)
from src.qsingular.plan import MultilevelPlan, RateExponents, select_budgets
from src.qsingular.slabs import SlabDecomposition
from src.qsingular.smooth import smooth_apply, smooth_estimator

__all__ = [
    "DyadicInterp",
    "Kernel",
    "MultilevelPlan",
    "OperatorEstimate",
    "PiecewisePolynomial",
    "RateExponents",
    "SlabDecomposition",
    "constant_kernel",
    "far_field_norms",
    "interpolate_operator",
    "multilevel_apply",
    "multilevel_estimator",
    "near_field_norms",
    "operator_reference",
    "power_kernel",
    "select_budgets",
    "smooth_apply",
    "smooth_estimator",
    "smooth_kernel",
]
