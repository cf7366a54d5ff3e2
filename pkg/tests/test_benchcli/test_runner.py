import numpy as np
import pytest

from src.benchcli.config import ExperimentConfig
from src.benchcli.problems import BenchmarkProblem, TrialOutcome, build_problem
from src.benchcli.runner import budget_generators, run_budget, run_experiment, run_trials, setting_medians
from src.core.data_types import ExperimentRecord, Setting, error_quantile
from src.core.exceptions import ConfigValidationError, UnregisteredProblemError
from src.exporters.csv import RecordCSVExporter


# ------------------- FIXTURES ------------------- #
@pytest.fixture
def fake_benchmark():
    """Create a cheap benchmark whose queries vary per trial."""
    prepared = []

    def trial(n, rng):
        error = rng.random() / n
        return TrialOutcome(error, error, n - int(rng.integers(0, 3)))

    return BenchmarkProblem("fake", 1.0, prepare=prepared.append, trial=trial), prepared


@pytest.fixture
def config(tmp_path):
    """Create a short ladder writing into a temporary directory."""
    return ExperimentConfig(budgets=(8, 16, 32, 64), trials=50, seed=5, out=tmp_path / "records.csv")


# ------------------- RUNNER TESTS ------------------- #
def test_budget_generators_are_split_per_rung():
    first = [g.random() for g in budget_generators(5, 0, 3)]
    assert first == [g.random() for g in budget_generators(5, 0, 3)]
    assert first != [g.random() for g in budget_generators(5, 1, 3)]


def test_run_budget_reduces_trials(fake_benchmark, config):
    benchmark, prepared = fake_benchmark
    record = run_budget(benchmark, config, 16, 1)
    errors = [rng.random() / 16 for rng in budget_generators(5, 1, 50)]
    assert prepared == [16]
    assert record.err_q75 == error_quantile(errors, 0.25)
    assert record.n_queries == 16
    assert record.trials == 50
    assert record.setting == "q"
    assert record.wall_ms == 0.0


def test_run_trials_returns_every_outcome(fake_benchmark, config):
    benchmark, prepared = fake_benchmark
    outcomes = run_trials(benchmark, config.with_overrides(trials=7), 32)
    errors = [rng.random() / 32 for rng in budget_generators(5, 0, 7)]
    assert prepared == [32]
    assert [error for error, _ in outcomes] == errors


def test_run_experiment_writes_records(fake_benchmark, config):
    benchmark, _ = fake_benchmark
    records = run_experiment(config, progress=None, benchmark=benchmark)
    assert [record.n_queries for record in records] == list(config.budgets)
    assert len(records) == 4
    assert RecordCSVExporter().read(config.out) == records


def test_threaded_trials_match_sequential(fake_benchmark, config):
    benchmark, _ = fake_benchmark
    sequential = run_experiment(config, write=False, progress=None, benchmark=benchmark)
    threaded = run_experiment(
        config.with_overrides(workers=4), write=False, progress=None, benchmark=benchmark
    )
    assert threaded == sequential


def test_same_seed_gives_identical_csv(fake_benchmark, config, tmp_path):
    benchmark, _ = fake_benchmark
    run_experiment(config, progress=None, benchmark=benchmark)
    again = config.with_overrides(out=tmp_path / "again.csv")
    run_experiment(again, progress=None, benchmark=benchmark)
    assert config.out.read_bytes() == again.out.read_bytes()


def test_wall_time_recorded_on_request(fake_benchmark, config):
    benchmark, _ = fake_benchmark
    records = run_experiment(
        config.with_overrides(record_wall_time=True), write=False, progress=None, benchmark=benchmark
    )
    assert all(record.wall_ms > 0 for record in records)


def test_progress_hook_called_per_budget(fake_benchmark, config, mocker):
    benchmark, _ = fake_benchmark
    hook = mocker.Mock()
    run_experiment(config, write=False, progress=hook, benchmark=benchmark)
    assert hook.call_count == 4
    index, total, record = hook.call_args_list[-1].args
    assert (index, total) == (3, 4)
    assert isinstance(record, ExperimentRecord)


def test_default_progress_prints_lines(fake_benchmark, config, capsys):
    benchmark, _ = fake_benchmark
    run_experiment(config, write=False, benchmark=benchmark)
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 4
    assert lines[0].strip().startswith("[1/4]")


def test_unknown_problem_raises(config):
    with pytest.raises(UnregisteredProblemError):
        run_experiment(config.with_overrides(problem="heat-equation"), progress=None)


# ------------------- END-TO-END LADDERS ------------------- #
def test_deterministic_mean_single_trial(tmp_path):
    config = ExperimentConfig(
        setting=Setting.DETERMINISTIC, trials=1, size=256, budgets=(16, 32, 64), out=tmp_path / "det.csv"
    )
    records = run_experiment(config, progress=None)
    assert [record.n_queries for record in records] == [16, 32, 64]
    assert all(record.setting == "det" and record.trials == 1 for record in records)


def test_quantum_mean_ladder_is_reproducible(tmp_path):
    config = ExperimentConfig(budgets=(16, 32, 64, 128), trials=50, seed=3, out=tmp_path / "q.csv")
    first = run_experiment(config, progress=None)
    second = run_experiment(config.with_overrides(out=tmp_path / "q2.csv"), progress=None)
    assert first == second
    assert [record.n_queries for record in first] == list(config.budgets)
    assert all(np.isfinite(record.err_q75) for record in first)


# ------------------- SETTING COMPARISON ------------------- #
def test_setting_medians_rejects_repeated_setting(config):
    with pytest.raises(ConfigValidationError):
        setting_medians([config, config.with_overrides(seed=6)], 16)


def test_setting_medians_rejects_mixed_problems(config):
    other = config.with_overrides(problem="weighted-integral", setting=Setting.RANDOMIZED)
    with pytest.raises(ConfigValidationError):
        setting_medians([config, other], 16)


def test_disk_median_errors_ordered_by_setting(config_dir):
    configs = [ExperimentConfig.from_file(config_dir / "disk_det.cfg")]
    for name in ("disk_ran.cfg", "disk_q.cfg"):
        configs.append(ExperimentConfig.from_file(config_dir / name).with_overrides(trials=5))
    n = configs[0].budgets[0]
    medians = setting_medians(configs, n)
    assert medians[Setting.DETERMINISTIC] >= medians[Setting.RANDOMIZED] >= medians[Setting.QUANTUM]
    assert medians[Setting.QUANTUM] > 0


def test_point_config_recovers_centre_value(config_dir):
    config = ExperimentConfig.from_file(config_dir / "disk_point_q.cfg")
    assert config.manifold == "point"
    assert config.trials >= 200
    benchmark = build_problem(config)
    outcomes = run_trials(benchmark, config, config.budgets[-1])
    errors = np.array([error for error, _ in outcomes])
    assert np.mean(errors <= 5e-3) >= 0.75
    estimate = benchmark.trial(config.budgets[-1], np.random.default_rng(0)).estimate
    assert estimate[0] == pytest.approx(0.25, abs=5e-3)
