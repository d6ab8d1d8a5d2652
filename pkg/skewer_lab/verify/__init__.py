"""Statistical verification battery."""

from skewer_lab.verify import (  # noqa: F401  registers the battery
    depoisson_checks,
    discrete_checks,
    kernel_checks,
    scaffolding_checks,
    type2_checks,
)
from skewer_lab.verify.pool import map_paths
from skewer_lab.verify.registry import (
    BATTERY,
    Outcome,
    UnknownTestError,
    VerificationError,
    battery_names,
    get_test,
    register,
)
from skewer_lab.verify.runner import run_all, run_test

__all__ = [
    "map_paths",
    "BATTERY",
    "Outcome",
    "UnknownTestError",
    "VerificationError",
    "battery_names",
    "get_test",
    "register",
    "run_all",
    "run_test",
]
