"""Scalar estimation: means, weighted means and weighted integrals.

Importing the package registers every mean estimator backend.
"""

from src.qestimate.base import MeanEstimator, WeightedSumProblem, make_mean_estimator
from src.qestimate.exact import DeterministicMeanEstimator, ExactMeanEstimator
from src.qestimate.integration import IntegrationProblem, discretize, weighted_integral
from src.qestimate.montecarlo import MonteCarloMeanEstimator, mc_mean
from src.qestimate.quantum import QuantumMeanEstimator, qmean
from src.qestimate.reduction import WeightReduction, reduce_weights
from src.qestimate.regions import Ball, Box, Complement, Intersection, UnionOfBoxes
from src.qestimate.weighted import weighted_mean

__all__ = [
    "Ball",
    "Box",
    "Complement",
    "DeterministicMeanEstimator",
    "ExactMeanEstimator",
    "IntegrationProblem",
    "Intersection",
    "MeanEstimator",
    "MonteCarloMeanEstimator",
    "QuantumMeanEstimator",
    "UnionOfBoxes",
    "WeightReduction",
    "WeightedSumProblem",
    "discretize",
    "make_mean_estimator",
    "mc_mean",
    "qmean",
    "reduce_weights",
    "weighted_integral",
    "weighted_mean",
]
