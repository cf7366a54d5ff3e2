import numpy as np
import pytest

from src.core.data_types import ExperimentRecord, OutputDistribution
from src.core.exceptions import ExportError
from src.exporters.csv import (
    DistributionCSVExporter,
    PlanCSVExporter,
    RecordCSVExporter,
    create_csv_exporter,
)
from src.qsingular.plan import select_budgets


# ------------------- FIXTURES ------------------- #
@pytest.fixture
def awkward_records(rng):
    """Create records whose errors need all 17 significant digits."""
    errors = rng.random(6) * 10.0 ** rng.integers(-12, 2, size=6)
    return [
        ExperimentRecord(
            problem="poisson-disk",
            setting=setting,
            n_queries=int(2**k),
            err_q75=float(err),
            trials=200,
            seed=123456789,
            wall_ms=float(np.pi * k),
        )
        for k, (setting, err) in enumerate(zip(["det", "ran", "q"] * 2, errors), start=4)
    ]


# ------------------- RECORD TESTS ------------------- #
def test_records_round_trip_bit_for_bit(tmp_path, awkward_records):
    exporter = RecordCSVExporter()
    path = exporter.write(awkward_records, tmp_path / "records.csv")
    assert exporter.read(path) == awkward_records


def test_records_files_are_byte_identical(tmp_path, awkward_records):
    exporter = RecordCSVExporter()
    first = exporter.write(awkward_records, tmp_path / "first.csv")
    second = exporter.write(list(awkward_records), tmp_path / "second.csv")
    assert first.read_bytes() == second.read_bytes()


def test_records_use_unix_line_endings(tmp_path, awkward_records):
    path = RecordCSVExporter().write(awkward_records, tmp_path / "records.csv")
    assert b"\r\n" not in path.read_bytes()


def test_empty_record_list_writes_header_only(tmp_path):
    exporter = RecordCSVExporter()
    path = exporter.write([], tmp_path / "empty.csv")
    assert exporter.read(path) == []


# ------------------- DISTRIBUTION TESTS ------------------- #
def test_distribution_round_trip(tmp_path):
    dist = OutputDistribution(
        support=np.sin(np.pi * np.arange(8) / 8) ** 2,
        probs=np.full(8, 0.125),
    )
    exporter = DistributionCSVExporter()
    back = exporter.read(exporter.write(dist, tmp_path / "dist.csv"))
    np.testing.assert_array_equal(back.support, dist.support)
    np.testing.assert_array_equal(back.probs, dist.probs)


def test_complex_distribution_raises():
    dist = OutputDistribution(support=np.array([1.0 + 1.0j, 0.0]), probs=np.array([0.5, 0.5]))
    with pytest.raises(ExportError):
        DistributionCSVExporter().to_rows(dist)


# ------------------- PLAN TESTS ------------------- #
def test_plan_dump_has_base_row(tmp_path):
    plan = select_budgets(256, s=2, sigma=-1.0, d=2, d1=1)
    exporter = PlanCSVExporter()
    rows = exporter.read(exporter.write(plan, tmp_path / "plan.csv"))
    assert len(rows) == plan.m + 1
    assert rows[0]["level"] == -1
    assert [row["level"] for row in rows[1:]] == list(range(plan.m))
    assert sum(row["queries"] for row in rows) == pytest.approx(sum(r["queries"] for r in plan.rows()))


# ------------------- FACTORY TESTS ------------------- #
@pytest.mark.parametrize(
    "kind, cls",
    [("records", RecordCSVExporter), ("distribution", DistributionCSVExporter), ("plan", PlanCSVExporter)],
)
def test_create_csv_exporter(kind, cls):
    assert isinstance(create_csv_exporter(kind), cls)


def test_create_csv_exporter_unknown_raises():
    with pytest.raises(ExportError):
        create_csv_exporter("parquet")
