"""Quantum query model: queries, algorithms, estimators and combinators."""

from src.qcore.algorithm import AlgorithmSpec, Stage, run_algorithm
from src.qcore.amplitude import ae_outcome_distribution
from src.qcore.combinators import boost_median, compose_linear
from src.qcore.estimator import Estimator
from src.qcore.query import QuerySpec, apply_query_unitary

__all__ = [
    "AlgorithmSpec",
    "Estimator",
    "QuerySpec",
    "Stage",
    "ae_outcome_distribution",
    "apply_query_unitary",
    "boost_median",
    "compose_linear",
    "run_algorithm",
]
