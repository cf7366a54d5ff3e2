"""Numeric defaults and the flat key=value configuration format."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Union

from src.core.exceptions import ConfigParseError, ConfigValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SimulatorConfig:
    """Configuration for the query-model backends."""

    max_qubits: int = 24  # State-vector cap
    analytic_value_bits: int = 32  # m'' used by the analytic backend
    statevector_value_bits: int = 3  # m'' used when qubits are materialised
    window_threshold_bits: int = 16  # Full-law sampling up to this many phase bits
    window_half_width: int = 2**15  # Outcomes kept on each side of an AE peak
    unitary_tolerance: float = 1e-10


@dataclass(frozen=True)
class QuadratureConfig:
    """Configuration for per-cell weight integrals."""

    degree: int = 8  # Gauss-Legendre points per axis
    rel_tolerance: float = 1e-9  # 2x refinement convergence check
    abs_tolerance: float = 1e-14
    max_depth: int = 5  # Refinement depth near singular points
    near_factor: float = 2.0  # Cells within this many diameters get the check
    partial_depth: int = 3  # Subdivision depth for cells cut by a region boundary
    radial_levels: int = 16  # Geometric grading of the radial direction
    max_cells: int = 4096  # Cap on 2^(d k) cells per leaf


DEFAULT_SIMULATOR = SimulatorConfig()
DEFAULT_QUADRATURE = QuadratureConfig()


def load_key_value_file(path: Union[str, Path]) -> Dict[str, str]:
    """Read a flat key=value file.

    Lines are `key = value`; `#` starts a comment; blank lines are skipped.

    Raises:
        ConfigParseError: If the file is unreadable, a line has no `=`, or a key repeats
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigParseError(f"Cannot read config file {path}: {str(e)}") from e

    values: Dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParseError(
                f"Line {number} is not key = value",
                details={"path": str(path), "line": number, "text": raw},
            )
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigParseError(
                f"Line {number} has an empty key", details={"line": number}
            )
        if key in values:
            raise ConfigParseError(
                f"Duplicate key '{key}' on line {number}", details={"key": key}
            )
        values[key] = value
    logger.debug("Loaded %s config keys from %s", len(values), path)
    return values


def parse_bool(key: str, value: str) -> bool:
    """Parse true/false style flags."""
    lowered = value.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ConfigValidationError(f"{key} must be a boolean, got '{value}'")


def parse_int(key: str, value: str) -> int:
    """Parse an integer value, accepting 2^k notation."""
    text = value.strip()
    try:
        if "^" in text:
            base, exponent = text.split("^", 1)
            return int(base) ** int(exponent)
        return int(text)
    except ValueError as e:
        raise ConfigValidationError(f"{key} must be an integer, got '{value}'") from e


def parse_float(key: str, value: str) -> float:
    """Parse a float value."""
    try:
        return float(value)
    except ValueError as e:
        raise ConfigValidationError(f"{key} must be a number, got '{value}'") from e


def parse_int_list(key: str, value: str) -> List[int]:
    """Parse a comma separated list of integers."""
    items = [item for item in value.split(",") if item.strip()]
    if not items:
        raise ConfigValidationError(f"{key} must list at least one value")
    return [parse_int(key, item) for item in items]
