import logging
from pathlib import Path

import pytest

from src.cli import SINGLE_RUN_PROBLEMS, build_parser, describe_estimate, main
from src.core.data_types import EstimatorBackend, Setting
from src.exporters.csv import RecordCSVExporter


# ------------------- FIXTURES ------------------- #
@pytest.fixture
def det_mean_config(tmp_config, tmp_path):
    """Write a small deterministic mean config."""
    return tmp_config(
        "problem = mean\n"
        "setting = det\n"
        "size = 256\n"
        "trials = 1\n"
        "budgets = 16, 32, 64\n"
        f"out = {tmp_path / 'det.csv'}\n"
    )


# ------------------- PARSER ------------------- #
def test_subcommands_are_required():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_common_flags_parse():
    args = build_parser().parse_args(["bench", "--seed", "4", "--backend", "mc", "--out", "x.csv", "--debug"])
    assert args.command == "bench"
    assert args.seed == 4
    assert args.backend == "mc"
    assert args.out == Path("x.csv")
    assert args.debug is True


def test_invalid_backend_exits():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["mean", "--backend", "gpu"])


def test_describe_estimate():
    assert describe_estimate(0.25) == "0.25"
    assert describe_estimate([0.5, 0.125]).startswith("2 probe values")


# ------------------- SINGLE RUNS ------------------- #
def test_mean_prints_estimate(det_mean_config, capsys):
    assert main(["mean", "--config", str(det_mean_config), "--n", "32"]) == 0
    out = capsys.readouterr().out
    assert "Estimation Successful" in out
    assert "Queries: 32" in out
    assert "Total processing time" in out


def test_single_run_writes_record_with_out(det_mean_config, tmp_path):
    out = tmp_path / "single.csv"
    assert main(["mean", "--config", str(det_mean_config), "--out", str(out)]) == 0
    (record,) = RecordCSVExporter().read(out)
    assert record.trials == 1
    assert record.n_queries == 64
    assert record.setting == "det"


def test_overrides_reach_the_run(mocker):
    run_single = mocker.patch("src.cli.run_single")
    assert main(["integrate", "--seed", "11", "--backend", "exact", "--setting", "ran"]) == 0
    config = run_single.call_args.args[0]
    assert config.problem == SINGLE_RUN_PROBLEMS["integrate"][0]
    assert config.seed == 11
    assert config.leaf_backend is EstimatorBackend.EXACT
    assert config.setting is Setting.RANDOMIZED


def test_subcommand_rejects_other_problem(tmp_config):
    path = tmp_config("problem = weighted-integral\n")
    assert main(["pde", "--config", str(path)]) == 2


# ------------------- BENCH ------------------- #
def test_bench_writes_csv_and_skips_short_fit(det_mean_config, tmp_path, capsys):
    assert main(["bench", "--config", str(det_mean_config)]) == 0
    out = capsys.readouterr().out
    assert "Skipped" in out
    assert len(RecordCSVExporter().read(tmp_path / "det.csv")) == 3


def test_bench_fits_rate(tmp_config, tmp_path, capsys):
    path = tmp_config("problem = mean\nsize = 1024\ntrials = 50\nbudgets = 16, 32, 64, 128, 256\n")
    out_path = tmp_path / "q.csv"
    assert main(["bench", "--config", str(path), "--out", str(out_path), "--seed", "2"]) == 0
    out = capsys.readouterr().out
    assert "Rate Fit Successful" in out
    assert "predicted -1.000" in out
    assert out_path.exists()


# ------------------- EXIT CODES ------------------- #
def test_unknown_config_key_exits_2(tmp_config):
    assert main(["bench", "--config", str(tmp_config("colour = blue\n"))]) == 2


def test_missing_config_file_exits_2(tmp_path):
    assert main(["bench", "--config", str(tmp_path / "absent.cfg")]) == 2


def test_unknown_problem_exits_3(tmp_config):
    assert main(["bench", "--config", str(tmp_config("problem = heat\n"))]) == 3


def test_malformed_plot_input_exits_3(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b\n1,2\n")
    assert main(["plot", str(path), "--out", str(tmp_path / "p.svg")]) == 3


def test_keyboard_interrupt_exits_1(mocker):
    mocker.patch("src.cli.run_bench", side_effect=KeyboardInterrupt)
    assert main(["bench"]) == 1


def test_debug_logs_traceback(tmp_config, caplog):
    with caplog.at_level(logging.ERROR):
        assert main(["bench", "--debug", "--config", str(tmp_config("problem = heat\n"))]) == 3
    assert "Debug traceback" in caplog.text


# ------------------- PLOT ------------------- #
def test_plot_round_trip(det_mean_config, tmp_path, capsys):
    assert main(["bench", "--config", str(det_mean_config)]) == 0
    svg = tmp_path / "rates.svg"
    assert main(["plot", str(tmp_path / "det.csv"), "--out", str(svg)]) == 0
    assert svg.exists()
    assert "Plot Successful" in capsys.readouterr().out


def test_plot_guides_from_configs(det_mean_config, tmp_path, mocker):
    assert main(["bench", "--config", str(det_mean_config)]) == 0
    emit = mocker.patch("src.cli.emit_plot", return_value=tmp_path / "rates.svg")
    csv = str(tmp_path / "det.csv")
    assert main(["plot", csv, "--config", str(det_mean_config), "--out", str(tmp_path / "rates.svg")]) == 0
    assert emit.call_args.args[2] == {("mean", "det"): 0.0}
