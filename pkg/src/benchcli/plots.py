"""Static log-log charts of error against measured queries."""

import logging
from pathlib import Path
from typing import Dict, Mapping, Optional, Sequence, Tuple, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from src.benchcli.config import ExperimentConfig  # noqa: E402
from src.benchcli.problems import build_problem  # noqa: E402
from src.core.exceptions import ExportError, PlotError  # noqa: E402
from src.exporters.csv import RecordCSVExporter  # noqa: E402

logger = logging.getLogger(__name__)

SVG_HASH_SALT = "qpde-bench"
SETTING_ORDER = ["det", "ran", "q"]
SETTING_STYLE = {"det": ("tab:blue", "s"), "ran": ("tab:orange", "^"), "q": ("tab:green", "o")}


def series_of(frame: pd.DataFrame) -> Dict[str, pd.DataFrame]:
    """Split records into series keyed by legend label, det/ran/q first."""
    multiple_problems = frame["problem"].nunique() > 1
    series = {}
    for (problem, setting), group in frame.groupby(["problem", "setting"], sort=False):
        label = f"{problem} {setting}" if multiple_problems else setting
        series[label] = group.sort_values("n_queries")

    def order(label: str):
        setting = label.split()[-1]
        rank = SETTING_ORDER.index(setting) if setting in SETTING_ORDER else len(SETTING_ORDER)
        return rank, label

    return {label: series[label] for label in sorted(series, key=order)}


def guide_slope(group: pd.DataFrame) -> float:
    """Least-squares slope of log2 error against log2 queries; 0 for a single point."""
    usable = group[(group["err_q75"] > 0) & (group["n_queries"] > 0)]
    x = np.log2(usable["n_queries"].to_numpy(dtype=float))
    if x.size < 2 or np.ptp(x) == 0:
        return 0.0
    slope, _ = np.polyfit(x, np.log2(usable["err_q75"].to_numpy(dtype=float)), 1)
    return float(slope)


def predicted_exponents(configs: Sequence[ExperimentConfig]) -> Dict[Tuple[str, str], float]:
    """Predicted rate exponent of each config, keyed by (problem, setting label)."""
    return {(config.problem, config.setting.label): build_problem(config).exponent for config in configs}

def emit_plot(
    csv_paths: Sequence[Union[str, Path]],
    out: Union[str, Path],
    exponents: Optional[Mapping[Tuple[str, str], float]] = None,
) -> Path:
    """Draw every record file into one SVG chart.

    Each series gets a marker line and a dashed guide through its first point.
    The guide has slope -exponent when `exponents` holds the predicted rate of the
    series, keyed by (problem, setting); otherwise it follows the fitted slope.

    Raises:
        PlotError: If no file is given, a file is malformed or holds no records
    """
    paths = [Path(path) for path in csv_paths]
    if not paths:
        raise PlotError("No record files given")
    try:
        frame = RecordCSVExporter().read_many(paths)
    except ExportError as e:
        raise PlotError(f"Cannot read records: {str(e)}", details=e.details) from e
    if frame.empty:
        raise PlotError("Record files hold no records", details={"paths": [str(p) for p in paths]})

    exponents = {} if exponents is None else exponents
    out = Path(out)
    matplotlib.rcParams["svg.hashsalt"] = SVG_HASH_SALT
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    try:
        for label, group in series_of(frame).items():
            color, marker = SETTING_STYLE.get(label.split()[-1], (None, "o"))
            n = group["n_queries"].to_numpy(dtype=float)
            err = group["err_q75"].to_numpy(dtype=float)
            (line,) = ax.loglog(n, err, marker=marker, color=color, label=label)
            fitted = guide_slope(group)
            key = (group["problem"].iloc[0], group["setting"].iloc[0])
            if key in exponents:
                slope = -float(exponents[key])
                guide_label = f"{label} predicted slope {slope:.2f} (fitted {fitted:.2f})"
            else:
                slope = fitted
                guide_label = f"{label} fitted slope {slope:.2f}"
            ax.loglog(
                n,
                err[0] * (n / n[0]) ** slope,
                linestyle="--",
                color=line.get_color(),
                alpha=0.6,
                label=guide_label,
            )
            logger.debug("Series %s: %s points, guide slope %.3f, fitted %.3f", label, len(group), slope, fitted)
        ax.set_xlabel("queries n")
        ax.set_ylabel("3/4-quantile error")
        ax.grid(True, which="both", alpha=0.3)
        ax.legend()
        fig.tight_layout()
        out.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out, format="svg", metadata={"Date": None})
    except OSError as e:
        raise PlotError(f"Cannot write {out}: {str(e)}", details={"path": str(out)}) from e
    finally:
        plt.close(fig)
    logger.info("Wrote plot to %s", out)
    return out
