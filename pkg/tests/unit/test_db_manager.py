"""Test module for database manager functionality."""

from pathlib import Path
from typing import Generator

import pytest

from skewer_lab.database.db_manager import DatabaseManager
from skewer_lab.database.models import RunRecord, StatReport


@pytest.fixture(scope="function")
def test_db_manager(tmp_path: Path) -> Generator[DatabaseManager, None, None]:
    """Create a test database manager."""
    db_path = tmp_path / "test.db"
    manager = DatabaseManager(str(db_path))
    yield manager
    manager.close()
    if db_path.exists():
        db_path.unlink()


def make_report(name: str = "d_metric_oracle", passed: bool = True) -> StatReport:
    """Create a battery report."""
    return StatReport(
        test_name=name,
        statistic=0.0,
        n_samples=20,
        reference=0.0,
        provenance="exhaustive correspondences",
        tolerance=0.0,
        passed=passed,
        runtime_seconds=0.01,
        seed=3,
        n_paths=20,
        details={"skipped": 1.0},
    )


def test_init_database(test_db_manager):
    """Test database initialization."""
    test_db_manager.init_database()

    tables = test_db_manager.list_tables()
    assert "reports" in tables
    assert "runs" in tables


def test_store_and_get_report(test_db_manager):
    """Test storing a report and reading it back."""
    test_db_manager.init_database()
    report = make_report()

    test_db_manager.store_report(report)

    assert test_db_manager.count_reports() == 1
    assert test_db_manager.get_reports() == [report]


def test_get_reports_by_test_name(test_db_manager):
    """Test filtering reports by test name."""
    test_db_manager.init_database()
    test_db_manager.store_report(make_report("d_metric_oracle"))
    test_db_manager.store_report(make_report("aldous_stationary", passed=False))

    reports = test_db_manager.get_reports("aldous_stationary")
    assert len(reports) == 1
    assert not reports[0].passed
    assert test_db_manager.count_reports("d_metric_oracle") == 1


def test_store_run(test_db_manager):
    """Test storing run metadata and linking a report to it."""
    test_db_manager.init_database()
    record = RunRecord("verify", "{}", 20, 3, "-", "2024-01-01T00:00:00")

    run_id = test_db_manager.store_run(record)
    test_db_manager.store_report(make_report(), run_id)

    runs = test_db_manager.get_runs()
    assert len(runs) == 1
    assert runs[0]["id"] == run_id
    assert runs[0]["command"] == "verify"


def test_reset_and_clear(test_db_manager):
    """Test clearing reports and resetting tables."""
    test_db_manager.init_database()
    test_db_manager.store_report(make_report())
    test_db_manager.clear_reports()
    assert test_db_manager.count_reports() == 0

    test_db_manager.store_report(make_report())
    test_db_manager.init_database(reset=True)
    assert test_db_manager.count_reports() == 0


def test_create_indices(test_db_manager):
    """Test index creation on an initialized store."""
    test_db_manager.init_database()
    test_db_manager.create_indices()
    test_db_manager._execute("SELECT name FROM sqlite_master WHERE type='index'")
    names = [row[0] for row in test_db_manager.cursor.fetchall()]
    assert "reports_test_name_idx" in names


def test_dry_run(tmp_path, capsys):
    """Test that dry run mode prints SQL instead of executing it."""
    db_path = tmp_path / "dry.db"
    manager = DatabaseManager(str(db_path), dry_run=True)
    manager.init_database()
    manager.store_report(make_report())

    captured = capsys.readouterr()
    assert "[DRY RUN] Would execute:" in captured.out
    assert "'d_metric_oracle'" in captured.out
    assert manager.get_reports() == []
    assert not db_path.exists()


def test_report_json():
    """Test the JSON form of a report."""
    data = make_report().to_dict()
    assert data["pass"] is True
    assert "passed" not in data
    assert make_report().to_json().startswith("{")
