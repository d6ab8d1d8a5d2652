"""Type-2 states, recorded paths and the shared level-grid recorder."""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from skewer_lab.partitions import EMPTY, IntervalPartition, diversity_estimate

logger = logging.getLogger(__name__)

DEFAULT_DY = 1e-2
DIVERSITY_FACTOR = 10.0


class Type2Error(ValueError):
    """Invalid type-2 initial state or construction request."""


@dataclass(frozen=True)
class Type2State:
    """Two top masses and the remaining interval partition."""

    m1: float
    m2: float
    alpha: IntervalPartition = EMPTY

    def __post_init__(self):
        if self.m1 < 0 or self.m2 < 0:
            raise Type2Error(f"Top masses must be nonnegative, got ({self.m1}, {self.m2})")
        if self.m1 + self.m2 == 0 and not self.alpha.is_empty:
            raise Type2Error("A state with both top masses zero must have an empty partition")

    @property
    def total_mass(self) -> float:
        return math.fsum((self.m1, self.m2, self.alpha.total_mass))

    @property
    def is_absorbed(self) -> bool:
        return self.m1 + self.m2 == 0

    @property
    def is_degenerate(self) -> bool:
        return self.alpha.is_empty and (self.m1 == 0 or self.m2 == 0)

    def three_mass(self) -> Tuple[float, float, float]:
        return self.m1, self.m2, self.alpha.total_mass

    def normalized(self) -> "Type2State":
        total = self.total_mass
        if total <= 0:
            raise Type2Error("Cannot normalize the absorbed state")
        return Type2State(
            self.m1 / total,
            self.m2 / total,
            IntervalPartition(tuple(x / total for x in self.alpha.masses)),
        )


ABSORBED = Type2State(0.0, 0.0, EMPTY)


@dataclass(frozen=True)
class Type2Path:
    """States on an increasing level grid, with clock bookkeeping.

    ``clock_index[i]`` is the index (1 or 2) of the clock top mass at ``levels[i]`` and
    ``changes[i]`` the number of clock changes up to that level.
    """

    levels: np.ndarray
    states: Tuple[Type2State, ...]
    clock_levels: Tuple[float, ...]
    clock_index: np.ndarray
    changes: np.ndarray
    degeneration_level: Optional[float]
    surviving_index: Optional[int]
    surviving_mass: Optional[float]
    lifetime: float
    scale_unit: float
    method: str

    def __len__(self) -> int:
        return len(self.levels)

    def state_at(self, y: float) -> Type2State:
        """State at the largest recorded level not above ``y``."""
        if y >= self.lifetime:
            return ABSORBED
        i = int(np.searchsorted(self.levels, y, side="right")) - 1
        return self.states[max(i, 0)]

    def clock_changes(self) -> int:
        """Number of clock changes before the lifetime."""
        return sum(1 for level in self.clock_levels[1:] if level < self.lifetime)

    def three_mass(self) -> np.ndarray:
        return np.array([s.three_mass() for s in self.states]).reshape(-1, 3)

    def total_mass(self) -> np.ndarray:
        return np.array([s.total_mass for s in self.states])

    def to_rows(self, path_id: int) -> List[tuple]:
        h = DIVERSITY_FACTOR * self.scale_unit
        rows = []
        for y, state, index, j in zip(self.levels, self.states, self.clock_index, self.changes):
            rows.append(
                (
                    path_id,
                    float(y),
                    state.m1,
                    state.m2,
                    state.alpha.total_mass,
                    len(state.alpha),
                    diversity_estimate(state.alpha, h),
                    int(index),
                    int(j),
                )
            )
        return rows


def clock_index_for(changes: int, first_clock: int = 1) -> int:
    """Clock label after ``changes`` clock changes; labels alternate from ``first_clock``."""
    return first_clock if changes % 2 == 0 else 3 - first_clock


def state_from_blocks(
    clock: float, rest: IntervalPartition, changes: int, first_clock: int = 1
) -> Type2State:
    """Place the clock mass and the leftmost remaining block on the right labels."""
    top = rest.masses[0] if len(rest) else 0.0
    alpha = IntervalPartition(rest.masses[1:]) if len(rest) > 1 else EMPTY
    if clock == 0 and top == 0:
        return ABSORBED
    if clock_index_for(changes, first_clock) == 1:
        return Type2State(clock, top, alpha)
    return Type2State(top, clock, alpha)


def recording_grid(
    lifetime: float,
    clock_levels: Sequence[float],
    dy: float,
    extra: Sequence[float] = (),
    max_level: float = math.inf,
) -> np.ndarray:
    """Uniform grid up to the lifetime (or ``max_level``) with clock and ``extra`` levels inserted.

    The last grid point is the lifetime, or ``max_level`` when that comes first.
    """
    if dy <= 0:
        raise Type2Error(f"dy must be positive, got {dy}")
    stop = min(lifetime, max_level)
    grid = np.arange(0.0, stop, dy) if stop > 0 else np.zeros(0)
    marks = [y for y in list(clock_levels) + list(extra) if 0 <= y < stop]
    grid = np.union1d(np.concatenate((grid, [0.0])), marks)
    if math.isfinite(stop):
        grid = np.append(grid[grid < stop], stop)
    return grid


def record_path(
    state_fn: Callable[[float], Type2State],
    clock_levels: Sequence[float],
    degeneration_level: Optional[float],
    lifetime: float,
    scale_unit: float,
    method: str,
    dy: float = DEFAULT_DY,
    max_level: float = math.inf,
    first_clock: int = 1,
    stop_at_degeneration: bool = False,
) -> Type2Path:
    """Evaluate ``state_fn`` on the recording grid and attach clock bookkeeping.

    With ``stop_at_degeneration`` the grid ends at the degeneration level.
    """
    if stop_at_degeneration and degeneration_level is not None:
        max_level = min(max_level, degeneration_level)
    if math.isinf(min(lifetime, max_level)):
        raise Type2Error("Cannot record an infinite path; pass a finite max_level")
    extra = [] if degeneration_level is None else [degeneration_level]
    levels = recording_grid(lifetime, clock_levels, dy, extra, max_level)
    clocks = np.asarray(clock_levels, dtype=float)
    changes = np.searchsorted(clocks, levels, side="right") - 1
    states = tuple(ABSORBED if y >= lifetime else state_fn(float(y)) for y in levels)
    surviving_index, surviving_mass = None, None
    if degeneration_level is not None and degeneration_level < lifetime:
        state = state_fn(degeneration_level)
        surviving_index = 1 if state.m1 > 0 else 2
        surviving_mass = state.m1 if surviving_index == 1 else state.m2
    logger.debug(
        "%s path: %d levels, %d clock changes, lifetime %.4f",
        method,
        len(levels),
        max(len(clock_levels) - 2, 0),
        lifetime,
    )
    return Type2Path(
        levels,
        states,
        tuple(float(y) for y in clock_levels),
        np.array([clock_index_for(int(j), first_clock) for j in changes], dtype=int),
        changes.astype(int),
        degeneration_level,
        surviving_index,
        surviving_mass,
        float(lifetime),
        scale_unit,
        method,
    )


def total_mass(path: Type2Path) -> np.ndarray:
    """m1 + m2 + ||alpha|| on the recorded grid."""
    return path.total_mass()


def degeneration(path: Type2Path, eps: float = 0.0) -> Tuple[float, int, float]:
    """Degeneration level, surviving label and surviving mass.

    With ``eps == 0`` the level found during construction is returned. Otherwise the recorded
    grid is swept for the first level where one top mass and the partition are at most ``eps``.
    """
    if eps == 0 and path.degeneration_level is not None:
        if path.surviving_index is None:
            return path.degeneration_level, 0, 0.0
        return path.degeneration_level, path.surviving_index, path.surviving_mass
    for y, state in zip(path.levels, path.states):
        small_alpha = state.alpha.total_mass <= eps
        if small_alpha and state.m2 <= eps:
            return float(y), 1, state.m1
        if small_alpha and state.m1 <= eps:
            return float(y), 2, state.m2
    return path.lifetime, 0, 0.0
