"""Registry of named battery tests."""

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Sequence

from skewer_lab.kernels import DISCRETIZATION_ALLOWANCE


class VerificationError(Exception):
    """A battery test could not be run."""


class UnknownTestError(VerificationError):
    """No test is registered under the requested name."""


@dataclass(frozen=True)
class Outcome:
    """What a check returns; the runner turns it into a ``StatReport``."""

    statistic: float
    reference: float
    tolerance: float
    provenance: str
    n_samples: int
    details: Dict[str, float] = field(default_factory=dict)


CheckFn = Callable[[int, int, Dict[str, Any]], Outcome]


@dataclass(frozen=True)
class BatteryTest:
    name: str
    check: CheckFn
    description: str
    default_paths: int


BATTERY: Dict[str, BatteryTest] = {}


def register(name: str, description: str, default_paths: int = 2000):
    """Decorator adding ``check(n_paths, seed, params)`` to the battery under ``name``."""

    def decorator(check: CheckFn) -> CheckFn:
        if name in BATTERY:
            raise VerificationError(f"Test {name} registered twice")
        BATTERY[name] = BatteryTest(name, check, description, default_paths)
        return check

    return decorator


def get_test(name: str) -> BatteryTest:
    try:
        return BATTERY[name]
    except KeyError as e:
        raise UnknownTestError(f"Unknown test {name!r}; known: {', '.join(sorted(BATTERY))}") from e


def battery_names() -> List[str]:
    return sorted(BATTERY)


def param(params: Dict[str, Any], key: str, default: Any, cast: Callable = float) -> Any:
    """``params[key]`` converted with ``cast``, or ``default``."""
    if key not in params or params[key] is None:
        return default
    try:
        return cast(params[key])
    except (TypeError, ValueError) as e:
        raise VerificationError(f"Invalid value for parameter {key}: {params[key]!r}") from e


def float_list(value: Any) -> List[float]:
    """Accept a number, a sequence or a comma separated string."""
    if isinstance(value, str):
        return [float(v) for v in value.split(",") if v.strip()]
    if isinstance(value, (list, tuple)):
        return [float(v) for v in value]
    return [float(value)]


def normalized_ks(pairs: List[tuple]) -> float:
    """Largest ratio of a KS distance to its threshold over ``(distance, threshold)`` pairs."""
    return max(d / t for d, t in pairs) if pairs else math.nan


def largest_increase(values: Sequence[float]) -> float:
    """Largest rise between consecutive values; 0 when they never increase."""
    return max([0.0] + [b - a for a, b in zip(values, values[1:])])


def ks_outcome(distance: float, threshold: float, provenance: str, n: int, **details) -> Outcome:
    return Outcome(distance, 0.0, threshold, provenance, n, dict(details))


def loosened(threshold: float) -> float:
    return DISCRETIZATION_ALLOWANCE * threshold
