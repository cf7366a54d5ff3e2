"""Experiment harness: configs, benchmark problems, budget ladders, rate fits and plots."""

from src.benchcli.config import ExperimentConfig
from src.benchcli.plots import emit_plot, predicted_exponents
from src.benchcli.problems import BenchmarkProblem, BenchmarkRegistry, TrialOutcome, build_problem
from src.benchcli.rates import RateFit, fit_points, fit_rate, success_frequency
from src.benchcli.runner import run_budget, run_experiment, run_trials, setting_medians

__all__ = [
    "BenchmarkProblem",
    "BenchmarkRegistry",
    "ExperimentConfig",
    "RateFit",
    "TrialOutcome",
    "build_problem",
    "emit_plot",
    "fit_points",
    "fit_rate",
    "predicted_exponents",
    "run_budget",
    "run_experiment",
    "run_trials",
    "setting_medians",
    "success_frequency",
]
