"""Base interface for CSV artefact exporters."""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import Any, ClassVar, Dict, Iterable, List, Union

import pandas as pd

from src.core.exceptions import ExportError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExportConfig:
    """Configuration for CSV export."""

    float_format: str = "%.17g"  # Round-trips every double
    create_parents: bool = True


class BaseExporter(ABC):
    """Writes typed items to CSV and reads them back.

    Subclasses fix the column schema and the conversion between items and rows.
    """

    columns: ClassVar[List[str]] = []
    dtypes: ClassVar[Dict[str, Any]] = {}

    def __init__(self, config: ExportConfig = ExportConfig()):
        self.config = config

    @abstractmethod
    def to_rows(self, items: Any) -> List[Dict[str, Any]]:
        """Flatten items into rows of the schema."""

    @abstractmethod
    def from_frame(self, frame: pd.DataFrame) -> Any:
        """Rebuild items from a validated frame."""

    def to_frame(self, items: Any) -> pd.DataFrame:
        return pd.DataFrame(self.to_rows(items), columns=self.columns)

    def write(self, items: Any, path: Union[str, Path]) -> Path:
        """Write items to a CSV file.

        Raises:
            ExportError: If the file cannot be written
        """
        path = Path(path)
        frame = self.to_frame(items)
        try:
            if self.config.create_parents:
                path.parent.mkdir(parents=True, exist_ok=True)
            frame.to_csv(path, index=False, float_format=self.config.float_format, lineterminator="\n")
        except OSError as e:
            raise ExportError(f"Cannot write {path}: {str(e)}", details={"path": str(path)}) from e
        logger.debug("Wrote %s rows to %s", len(frame), path)
        return path

    def read_frame(self, path: Union[str, Path]) -> pd.DataFrame:
        """Read and validate a CSV file against the schema.

        Raises:
            ExportError: If the file is unreadable, malformed or misses columns
        """
        path = Path(path)
        try:
            frame = pd.read_csv(path, dtype=self.dtypes, float_precision="round_trip")
        except (OSError, ValueError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            raise ExportError(f"Cannot read {path}: {str(e)}", details={"path": str(path)}) from e
        missing = [column for column in self.columns if column not in frame.columns]
        if missing:
            raise ExportError(
                f"{path} misses columns: {', '.join(missing)}",
                details={"path": str(path), "missing": missing},
            )
        return frame[self.columns]

    def read(self, path: Union[str, Path]) -> Any:
        return self.from_frame(self.read_frame(path))

    def read_many(self, paths: Iterable[Union[str, Path]]) -> pd.DataFrame:
        """Concatenate several files of the same schema."""
        frames = [self.read_frame(path) for path in paths]
        if not frames:
            raise ExportError("No files given")
        return pd.concat(frames, ignore_index=True)
