"""Budget-ladder runner: trials per budget, error quantiles and CSV records."""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.benchcli.config import ExperimentConfig
from src.benchcli.problems import BenchmarkProblem, build_problem
from src.core.data_types import ExperimentRecord, Setting, error_quantile
from src.core.exceptions import ConfigValidationError
from src.core.seeds import budget_seed
from src.exporters.csv import RecordCSVExporter

logger = logging.getLogger(__name__)

ProgressHook = Callable[[int, int, ExperimentRecord], None]


def budget_generators(master_seed: int, budget_index: int, count: int) -> List[np.random.Generator]:
    """Independent trial generators of one budget rung."""
    return [np.random.default_rng(child) for child in budget_seed(master_seed, budget_index).spawn(count)]


def print_progress(index: int, total: int, record: ExperimentRecord) -> None:
    print(
        f"  [{index + 1}/{total}] n_queries={record.n_queries} "
        f"err_q75={record.err_q75:.3e} ({record.trials} trials)"
    )


def run_trials(
    benchmark: BenchmarkProblem, config: ExperimentConfig, n: int, budget_index: int = 0
) -> List[Tuple[float, int]]:
    """(error, n_queries) of every trial of one budget."""
    benchmark.prepare(n)
    rngs = budget_generators(config.seed, budget_index, config.trials)
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            return list(pool.map(lambda rng: benchmark(n, rng), rngs))
    return [benchmark(n, rng) for rng in rngs]


def run_budget(
    benchmark: BenchmarkProblem, config: ExperimentConfig, n: int, budget_index: int
) -> ExperimentRecord:
    """Run all trials of one budget and reduce them to a record."""
    start = time.perf_counter()
    outcomes = run_trials(benchmark, config, n, budget_index)
    errors = [error for error, _ in outcomes]
    wall_ms = (time.perf_counter() - start) * 1000.0 if config.record_wall_time else 0.0
    record = ExperimentRecord(
        problem=benchmark.name,
        setting=config.setting.label,
        n_queries=max(queries for _, queries in outcomes),
        err_q75=error_quantile(errors, config.theta),
        trials=config.trials,
        seed=config.seed,
        wall_ms=wall_ms,
    )
    logger.debug("Budget %s: %s", n, record)
    return record


def run_experiment(
    config: ExperimentConfig,
    write: bool = True,
    progress: Optional[ProgressHook] = print_progress,
    benchmark: Optional[BenchmarkProblem] = None,
) -> List[ExperimentRecord]:
    """Run the budget ladder of a config and persist the records.

    Args:
        config: Validated experiment configuration
        write: Write the records to config.out
        progress: Called after each budget, silent when None
        benchmark: Instance to run, built from the config when None

    Raises:
        UnregisteredProblemError: If the problem id is unknown
        ExportError: If the output file cannot be written
    """
    if benchmark is None:
        benchmark = build_problem(config)
    records = []
    for index, n in enumerate(config.budgets):
        record = run_budget(benchmark, config, n, index)
        records.append(record)
        if progress is not None:
            progress(index, len(config.budgets), record)

    if write:
        RecordCSVExporter().write(records, config.out)
        logger.info("Wrote %s records to %s", len(records), config.out)
    return records


def setting_medians(configs: Sequence[ExperimentConfig], n: int) -> Dict[Setting, float]:
    """Median trial error of each config's setting at the common budget n.

    Raises:
        ConfigValidationError: If two configs share a setting or differ in problem
    """
    problems = {config.problem for config in configs}
    settings = [config.setting for config in configs]
    if len(problems) > 1 or len(set(settings)) < len(settings):
        raise ConfigValidationError(
            "Setting comparison needs one config per setting of a single problem",
            details={"problems": sorted(problems), "settings": [s.label for s in settings]},
        )
    medians = {}
    for config in configs:
        errors = [error for error, _ in run_trials(build_problem(config), config, n)]
        medians[config.setting] = float(np.median(errors))
        logger.info(
            "%s at n=%s: median error %.4g over %s trials",
            config.setting.label,
            n,
            medians[config.setting],
            len(errors),
        )
    return medians
