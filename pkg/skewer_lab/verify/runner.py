"""Run battery tests and turn their outcomes into reports."""

import logging
import math
import time
from typing import Any, Dict, Iterable, List, Optional

from skewer_lab.database.models import StatReport
from skewer_lab.verify.registry import Outcome, VerificationError, battery_names, get_test

logger = logging.getLogger(__name__)


def _passes(outcome: Outcome) -> bool:
    if math.isnan(outcome.statistic) or math.isnan(outcome.tolerance):
        return False
    return abs(outcome.statistic - outcome.reference) <= outcome.tolerance


def run_test(
    name: str,
    n_paths: Optional[int] = None,
    seed: int = 0,
    params: Optional[Dict[str, Any]] = None,
) -> StatReport:
    """Run the battery test ``name``; ``n_paths`` defaults to the test's own default."""
    test = get_test(name)
    n_paths = n_paths or test.default_paths
    if n_paths < 1:
        raise VerificationError(f"n_paths must be positive, got {n_paths}")
    logger.info("Running %s with %d paths, seed %d", name, n_paths, seed)
    start = time.perf_counter()
    outcome = test.check(n_paths, seed, dict(params or {}))
    runtime = time.perf_counter() - start
    report = StatReport(
        test_name=name,
        statistic=float(outcome.statistic),
        n_samples=int(outcome.n_samples),
        reference=float(outcome.reference),
        provenance=outcome.provenance,
        tolerance=float(outcome.tolerance),
        passed=_passes(outcome),
        runtime_seconds=runtime,
        seed=seed,
        n_paths=n_paths,
        details={k: float(v) for k, v in outcome.details.items()},
    )
    level = logging.INFO if report.passed else logging.WARNING
    logger.log(
        level,
        "%s: statistic %.5g, reference %.5g, tolerance %.5g -> %s (%.1fs)",
        name,
        report.statistic,
        report.reference,
        report.tolerance,
        "pass" if report.passed else "FAIL",
        runtime,
    )
    return report


def run_all(
    n_paths: Optional[int] = None,
    seed: int = 0,
    params: Optional[Dict[str, Any]] = None,
    names: Optional[Iterable[str]] = None,
) -> List[StatReport]:
    """Run every registered test (or ``names``) with shared settings."""
    return [run_test(name, n_paths, seed, params) for name in (names or battery_names())]
