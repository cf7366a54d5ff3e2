"""CSV exporters for experiment records, output distributions and multilevel plans."""

from typing import Any, Dict, List, Sequence

import numpy as np
import pandas as pd

from src.core.data_types import ExperimentRecord, OutputDistribution
from src.core.exceptions import ExportError
from src.qsingular.plan import MultilevelPlan

from .base import BaseExporter, ExportConfig

RECORD_COLUMNS = ["problem", "setting", "n_queries", "err_q75", "trials", "seed", "wall_ms"]


class RecordCSVExporter(BaseExporter):
    """Records in the schema problem,setting,n_queries,err_q75,trials,seed,wall_ms."""

    columns = RECORD_COLUMNS
    dtypes = {
        "problem": str,
        "setting": str,
        "n_queries": np.int64,
        "err_q75": float,
        "trials": np.int64,
        "seed": np.int64,
        "wall_ms": float,
    }

    def to_rows(self, items: Sequence[ExperimentRecord]) -> List[Dict[str, Any]]:
        return [
            {
                "problem": record.problem,
                "setting": record.setting,
                "n_queries": int(record.n_queries),
                "err_q75": float(record.err_q75),
                "trials": int(record.trials),
                "seed": int(record.seed),
                "wall_ms": float(record.wall_ms),
            }
            for record in items
        ]

    def from_frame(self, frame: pd.DataFrame) -> List[ExperimentRecord]:
        return [
            ExperimentRecord(
                problem=str(row.problem),
                setting=str(row.setting),
                n_queries=int(row.n_queries),
                err_q75=float(row.err_q75),
                trials=int(row.trials),
                seed=int(row.seed),
                wall_ms=float(row.wall_ms),
            )
            for row in frame.itertuples(index=False)
        ]


class DistributionCSVExporter(BaseExporter):
    """Real-valued output laws as outcome,probability rows."""

    columns = ["outcome", "probability"]
    dtypes = {"outcome": float, "probability": float}

    def to_rows(self, items: OutputDistribution) -> List[Dict[str, Any]]:
        support = np.asarray(items.support)
        if np.iscomplexobj(support):
            raise ExportError("Only real-valued distributions can be exported")
        return [
            {"outcome": float(value), "probability": float(prob)}
            for value, prob in zip(support, items.probs)
        ]

    def from_frame(self, frame: pd.DataFrame) -> OutputDistribution:
        return OutputDistribution(
            support=frame["outcome"].to_numpy(), probs=frame["probability"].to_numpy()
        )


class PlanCSVExporter(BaseExporter):
    """Per-level budgets and boosts of a multilevel plan; level -1 is the base level."""

    columns = ["level", "cubes", "budget", "boost", "grid_points", "queries", "predicted_exponent"]

    def to_rows(self, items: MultilevelPlan) -> List[Dict[str, Any]]:
        return items.rows()

    def from_frame(self, frame: pd.DataFrame) -> List[Dict[str, Any]]:
        return frame.to_dict(orient="records")


def create_csv_exporter(kind: str = "records", config: ExportConfig = ExportConfig()) -> BaseExporter:
    """Factory function for the CSV exporters.

    Raises:
        ExportError: If the kind is unknown
    """
    exporters = {
        "records": RecordCSVExporter,
        "distribution": DistributionCSVExporter,
        "plan": PlanCSVExporter,
    }
    if kind not in exporters:
        raise ExportError(f"Unknown exporter: {kind}", details={"kind": kind})
    return exporters[kind](config)
