import logging
from pathlib import Path

import pytest

from src.benchcli.config import ExperimentConfig
from src.core.data_types import Backend, EstimatorBackend, Setting
from src.core.exceptions import ConfigParseError, ConfigValidationError


# ------------------- DEFAULTS ------------------- #
def test_defaults():
    config = ExperimentConfig()
    assert config.problem == "mean"
    assert config.setting is Setting.QUANTUM
    assert config.leaf_backend is EstimatorBackend.QUANTUM
    assert config.simulator is Backend.ANALYTIC
    assert config.budgets == (16, 32, 64, 128)
    assert config.trials == 50
    assert config.theta == 0.25
    assert config.out == Path("results/records.csv")
    assert config.record_wall_time is False


# ------------------- FILE PARSING ------------------- #
def test_from_file(tmp_config):
    path = tmp_config(
        "problem = poisson-disk\n"
        "setting = ran\n"
        "r = 1\n"
        "manifold = circle\n"
        "rhs = bubble\n"
        "budgets = 2^6, 2^7, 2^8\n"
        "trials = 200\n"
        "seed = 7\n"
        "out = results/disk_ran.csv\n"
        "record_wall_time = yes\n"
        "size = 0.25\n"
    )
    config = ExperimentConfig.from_file(path)
    assert config.problem == "poisson-disk"
    assert config.setting is Setting.RANDOMIZED
    assert config.leaf_backend is EstimatorBackend.MONTE_CARLO
    assert config.budgets == (64, 128, 256)
    assert config.trials == 200
    assert config.seed == 7
    assert config.out == Path("results/disk_ran.csv")
    assert config.record_wall_time is True
    assert config.size == 0.25


def test_backend_key_overrides_setting_leaf(tmp_config):
    config = ExperimentConfig.from_file(tmp_config("setting = q\nbackend = exact\nsimulator = statevector\n"))
    assert config.setting is Setting.QUANTUM
    assert config.leaf_backend is EstimatorBackend.EXACT
    assert config.simulator is Backend.STATEVECTOR


def test_unknown_keys_raise(tmp_config):
    with pytest.raises(ConfigValidationError) as exc_info:
        ExperimentConfig.from_file(tmp_config("problem = mean\ncolour = blue\n"))
    assert exc_info.value.details == {"unknown": ["colour"]}


@pytest.mark.parametrize(
    "text",
    [
        "setting = classical\n",
        "backend = gpu\n",
        "trials = many\n",
        "record_wall_time = sometimes\n",
    ],
)
def test_malformed_values_raise(tmp_config, text):
    with pytest.raises(ConfigValidationError):
        ExperimentConfig.from_file(tmp_config(text))


def test_malformed_file_raises_parse_error(tmp_config):
    with pytest.raises(ConfigParseError):
        ExperimentConfig.from_file(tmp_config("problem mean\n"))


# ------------------- VALIDATION ------------------- #
@pytest.mark.parametrize(
    "overrides",
    [
        {"budgets": ()},
        {"budgets": (32, 16)},
        {"budgets": (16, 16)},
        {"budgets": (0, 16)},
        {"trials": 0},
        {"theta": 1.0},
        {"theta": -0.1},
        {"tolerance": 0.0},
        {"workers": 0},
        {"d": 2, "d1": 3},
        {"r": -1},
        {"s": 0},
    ],
)
def test_invalid_values_raise(overrides):
    with pytest.raises(ConfigValidationError):
        ExperimentConfig(**overrides)


def test_few_randomized_trials_warn(caplog):
    with caplog.at_level(logging.WARNING):
        ExperimentConfig(trials=10)
    assert "Only 10 trials" in caplog.text


def test_single_deterministic_trial_is_quiet(caplog):
    with caplog.at_level(logging.WARNING):
        config = ExperimentConfig(setting=Setting.DETERMINISTIC, trials=1)
    assert config.trials == 1
    assert caplog.text == ""


# ------------------- OVERRIDES ------------------- #
def test_with_overrides_ignores_none():
    config = ExperimentConfig(seed=3).with_overrides(seed=None, out=None, backend=None)
    assert config == ExperimentConfig(seed=3)


def test_with_overrides_parses_backend_and_revalidates():
    config = ExperimentConfig().with_overrides(seed=9, backend="det", out="x/y.csv")
    assert config.seed == 9
    assert config.leaf_backend is EstimatorBackend.DETERMINISTIC
    assert config.out == Path("x/y.csv")
    with pytest.raises(ConfigValidationError):
        config.with_overrides(trials=0)
