"""Performance tests for the results store and the partition metric."""

import pytest

from skewer_lab.database.db_manager import DatabaseManager
from skewer_lab.database.models import StatReport
from skewer_lab.kernels import path_stream
from skewer_lab.partitions import dip_distance
from skewer_lab.verify.discrete_checks import random_annotated_partition


def create_test_reports(count: int) -> list[StatReport]:
    """Create battery reports."""
    return [
        StatReport(
            test_name=f"check_{i % 5}",
            statistic=0.01 * i,
            n_samples=1000,
            reference=0.0,
            provenance="benchmark",
            tolerance=1.0,
            passed=True,
            runtime_seconds=0.5,
            seed=i,
            n_paths=1000,
        )
        for i in range(count)
    ]


@pytest.mark.performance
def test_bulk_report_insert(db_manager: DatabaseManager, benchmark):
    """Test the performance of bulk report insertion."""

    def bulk_insert():
        for report in create_test_reports(100):
            db_manager.store_report(report)

    benchmark(bulk_insert)


@pytest.mark.performance
def test_report_query_performance(db_manager: DatabaseManager, benchmark):
    """Test the performance of report queries."""
    for report in create_test_reports(100):
        db_manager.store_report(report)

    result = benchmark(db_manager.get_reports, "check_0")
    assert len(result) == 20


@pytest.mark.performance
def test_exact_distance_performance(benchmark):
    """Test the dynamic program on partitions with up to 10 blocks."""
    rng = path_stream(0, 0)
    pairs = [
        (random_annotated_partition(rng, 10), random_annotated_partition(rng, 10))
        for _ in range(50)
    ]

    def distances():
        return [dip_distance(beta, gamma).value for beta, gamma in pairs]

    assert len(benchmark(distances)) == 50
