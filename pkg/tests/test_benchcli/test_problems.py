import numpy as np
import pytest

from src.benchcli.config import ExperimentConfig
from src.benchcli.problems import BenchmarkRegistry, build_problem, probe_grid, smooth_setting_exponent
from src.core.data_types import EstimatorBackend, Setting
from src.core.exceptions import UnregisteredProblemError
from src.qsingular.plan import RateExponents


# ------------------- REGISTRY ------------------- #
def test_registered_problems():
    assert BenchmarkRegistry.names() == [
        "mean",
        "poisson-ball",
        "poisson-disk",
        "singular-operator",
        "smooth-operator",
        "weighted-integral",
    ]


def test_unknown_problem_raises():
    with pytest.raises(UnregisteredProblemError):
        build_problem(ExperimentConfig(problem="wave-equation"))


# ------------------- EXPONENTS ------------------- #
@pytest.mark.parametrize(
    "setting, exponent",
    [(Setting.QUANTUM, 1.0), (Setting.RANDOMIZED, 0.5), (Setting.DETERMINISTIC, 0.0)],
)
def test_mean_exponents(setting, exponent):
    problem = build_problem(ExperimentConfig(setting=setting, trials=1, size=64))
    assert problem.exponent == exponent


@pytest.mark.parametrize(
    "setting, exponent",
    [(Setting.QUANTUM, 1.5), (Setting.RANDOMIZED, 1.0), (Setting.DETERMINISTIC, 0.5)],
)
def test_smooth_setting_exponents(setting, exponent):
    rates = RateExponents(d=2, d1=1, s=2, sigma=0.0, r=1)
    assert smooth_setting_exponent(rates, setting.leaf_backend) == pytest.approx(exponent)


def test_probe_grid():
    assert probe_grid(0).shape == (1, 0)
    grid = probe_grid(2)
    assert grid.shape == (81, 2)
    assert grid.min() == 0.0 and grid.max() == 1.0


# ------------------- TRIALS ------------------- #
def test_mean_trial_measures_queries(rng):
    problem = build_problem(ExperimentConfig(size=512, seed=4))
    error, n_queries = problem(64, rng)
    assert n_queries == 64
    assert 0.0 <= error <= 1.0


def test_exact_mean_has_zero_error(rng):
    problem = build_problem(ExperimentConfig(backend=EstimatorBackend.EXACT, size=128, trials=1))
    outcome = problem.trial(32, rng)
    assert outcome.error == pytest.approx(0.0, abs=1e-12)
    assert outcome.n_queries == 0


def test_mean_instance_depends_on_seed_only():
    first = build_problem(ExperimentConfig(setting=Setting.DETERMINISTIC, trials=1, size=300, seed=1))
    second = build_problem(ExperimentConfig(setting=Setting.DETERMINISTIC, trials=1, size=300, seed=1))
    other = build_problem(ExperimentConfig(setting=Setting.DETERMINISTIC, trials=1, size=300, seed=2))
    rng = np.random.default_rng(0)
    assert first.trial(32, rng).estimate == second.trial(32, rng).estimate
    assert first.trial(32, rng).estimate != other.trial(32, rng).estimate


def test_prepare_caches_estimators():
    problem = build_problem(ExperimentConfig(size=256))
    assert problem.prepare(32) is problem.prepare(32)
    assert problem.prepare(32) is not problem.prepare(64)


def test_deterministic_poisson_disk_trial_ignores_seed():
    config = ExperimentConfig(problem="poisson-disk", setting=Setting.DETERMINISTIC, trials=1, s=3)
    problem = build_problem(config)
    first = problem.trial(64, np.random.default_rng(0))
    second = problem.trial(64, np.random.default_rng(99))
    np.testing.assert_array_equal(first.estimate, second.estimate)
    assert np.isfinite(first.error) and first.error < 1.0
    assert first.n_queries > 0
