"""CSV persistence of records, distributions and plans."""

from .base import BaseExporter, ExportConfig
from .csv import DistributionCSVExporter, PlanCSVExporter, RecordCSVExporter, create_csv_exporter

__all__ = [
    "BaseExporter",
    "DistributionCSVExporter",
    "ExportConfig",
    "PlanCSVExporter",
    "RecordCSVExporter",
    "create_csv_exporter",
]
