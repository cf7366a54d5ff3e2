"""Command line interface for the rate benchmarks. Main entry point."""

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Dict, Optional, Sequence

import numpy as np

from src.benchcli.config import ExperimentConfig
from src.benchcli.plots import emit_plot, predicted_exponents
from src.benchcli.problems import BenchmarkProblem, build_problem
from src.benchcli.rates import MIN_FIT_POINTS, fit_rate
from src.benchcli.runner import run_experiment
from src.core.data_types import EstimatorBackend, ExperimentRecord, Setting
from src.core.exceptions import ConfigError, ConfigValidationError, QPDEError
from src.core.seeds import make_rng
from src.exporters.csv import RecordCSVExporter

# start timer when we begin running the cli script
start_time = time.perf_counter()

logger = logging.getLogger(__name__)

# Problems each single-run subcommand accepts; the first is its default
SINGLE_RUN_PROBLEMS: Dict[str, Sequence[str]] = {
    "mean": ("mean",),
    "integrate": ("weighted-integral",),
    "singular": ("singular-operator", "smooth-operator"),
    "pde": ("poisson-disk", "poisson-ball"),
}


def setup_logging(debug: bool = False):
    """Configure logging based on debug flag."""
    logging.basicConfig(
        level=logging.DEBUG if debug else logging.INFO,
        format="%(message)s",
    )


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    """Config file values, then CLI overrides."""
    config = ExperimentConfig() if args.config is None else ExperimentConfig.from_file(args.config)
    setting = None if args.setting is None else Setting.from_label(args.setting)
    config = config.with_overrides(seed=args.seed, backend=args.backend, out=args.out, setting=setting)
    allowed = SINGLE_RUN_PROBLEMS.get(args.command)
    if allowed is not None and config.problem not in allowed:
        if args.config is not None and config.problem != ExperimentConfig.problem:
            raise ConfigValidationError(
                f"Subcommand {args.command} runs {', '.join(allowed)}, not {config.problem}",
                details={"problem": config.problem},
            )
        config = config.with_overrides(problem=allowed[0])
    return config


def describe_estimate(estimate) -> str:
    values = np.real(np.asarray(estimate))
    if values.ndim == 0:
        return f"{float(values):.10g}"
    return f"{values.size} probe values in [{values.min():.6g}, {values.max():.6g}]"


def run_single(config: ExperimentConfig, n: Optional[int], write_out: bool) -> ExperimentRecord:
    """One estimate at one budget, printed with its error and query count."""
    n = config.budgets[-1] if n is None else n
    print(f"ⅰ Problem Setup Initialised ({config.problem}).")
    benchmark = build_problem(config)
    print("    ✓ Problem Setup Successful.\n")

    print(f"ⅱ Estimation Initialised (n = {n}, {config.leaf_backend.value} leaves).")
    outcome = benchmark.trial(n, make_rng(config.seed))
    print("    ✓ Estimation Successful.")
    print(f"      Estimate: {describe_estimate(outcome.estimate)}")
    print(f"      Error: {outcome.error:.6e}")
    print(f"      Queries: {outcome.n_queries}\n")

    record = ExperimentRecord(
        problem=benchmark.name,
        setting=config.setting.label,
        n_queries=outcome.n_queries,
        err_q75=outcome.error,
        trials=1,
        seed=config.seed,
    )
    if write_out:
        RecordCSVExporter().write([record], config.out)
        print(f"      Record written to {config.out}")
    return record


def run_bench(config: ExperimentConfig) -> None:
    print(f"ⅰ Problem Setup Initialised ({config.problem}).")
    benchmark: BenchmarkProblem = build_problem(config)
    print("    ✓ Problem Setup Successful.")
    print(f"      Predicted exponent: {benchmark.exponent:.3f}\n")

    print(f"ⅱ Budget Ladder Initialised ({len(config.budgets)} budgets, {config.trials} trials each).")
    records = run_experiment(config, benchmark=benchmark)
    print("    ✓ Budget Ladder Successful.")
    print(f"      Records written to {config.out}\n")

    print("ⅲ Rate Fit Initialised.")
    if len(records) < MIN_FIT_POINTS:
        print(f"      Skipped: a fit needs at least {MIN_FIT_POINTS} budgets.")
        return
    fit = fit_rate(records, benchmark.exponent, config.tolerance)
    print("    ✓ Rate Fit Successful.")
    print(f"      {fit}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="Path to a key=value experiment config")
    common.add_argument("--seed", type=int, help="Master seed, overrides the config")
    common.add_argument(
        "--backend",
        choices=[member.value for member in EstimatorBackend],
        help="Leaf estimator backend, overrides the setting",
    )
    common.add_argument(
        "--setting",
        choices=[member.label for member in Setting],
        help="Rate comparison setting (det, ran, q)",
    )
    common.add_argument("--out", type=Path, help="Output CSV path, overrides the config")
    common.add_argument("--debug", action="store_true", help="Enable debug logging")

    parser = argparse.ArgumentParser(description="Query-complexity rate benchmarks for quantum and classical estimators")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command, help_text in (
        ("mean", "Estimate the mean of a bounded sequence"),
        ("integrate", "Estimate a weighted integral with a singular weight"),
        ("singular", "Approximate a weakly singular integral operator"),
        ("pde", "Solve the Poisson problem on a submanifold"),
    ):
        single = subparsers.add_parser(command, parents=[common], help=help_text)
        single.add_argument("--n", type=int, help="Budget, the largest config budget by default")
    subparsers.add_parser("bench", parents=[common], help="Run a budget ladder and write the records CSV")

    plot = subparsers.add_parser("plot", help="Draw record CSV files into one SVG chart")
    plot.add_argument("csv_paths", nargs="+", type=Path, help="Record CSV files")
    plot.add_argument("--out", type=Path, default=Path("results/rates.svg"), help="Output SVG path")
    plot.add_argument(
        "--config",
        dest="configs",
        action="append",
        type=Path,
        help="Config behind a record file; its predicted rate sets the guide slope (repeatable)",
    )
    plot.add_argument("--debug", action="store_true", help="Enable debug logging")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for the CLI."""
    parser = build_parser()
    args = parser.parse_args(argv)

    setup_logging(args.debug)

    try:
        if args.command == "plot":
            print(f"ⅰ Plot Initialised ({len(args.csv_paths)} files).")
            configs = [ExperimentConfig.from_file(path) for path in args.configs or []]
            out = emit_plot(args.csv_paths, args.out, predicted_exponents(configs))
            print("    ✓ Plot Successful.")
            print(f"      Written to {out}")
        else:
            config = load_config(args)
            if args.command == "bench":
                run_bench(config)
            else:
                run_single(config, args.n, write_out=args.out is not None)

        # print elapsed time if timer was started
        if start_time is not None:
            elapsed = time.perf_counter() - start_time
            print(f"      ✔ Total processing time: {elapsed:.2f}s")
        return 0

    except ConfigError as e:
        logger.error(str(e))
        if args.debug:
            logger.exception("Debug traceback:")
        return 2
    except (QPDEError, OSError) as e:
        logger.error(str(e))
        if args.debug:
            logger.exception("Debug traceback:")
        return 3
    except KeyboardInterrupt:
        logger.info("\nProcess interrupted by user")
        return 1


if __name__ == "__main__":
    sys.exit(main())
