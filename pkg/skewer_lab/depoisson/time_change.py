"""De-Poissonization: normalize to unit mass and run on the time scale of integrated 1/mass."""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from skewer_lab.type2.states import Type2Path, Type2State

logger = logging.getLogger(__name__)

DEFAULT_DU = 1e-3


class DePoissonizationError(ValueError):
    """Path cannot be time-changed."""


@dataclass(frozen=True)
class DePoissonizedPath:
    """Unit-mass states on the grid ``u`` with ``rho[i]`` the level of the original path.

    ``absorption_time`` is the time at which a top mass reaches 1 (the degeneration level of the
    underlying path, time-changed), or ``None`` when it is beyond the recorded range.
    """

    u: np.ndarray
    states: Tuple[Type2State, ...]
    rho: np.ndarray
    absorption_time: Optional[float]
    level_grid: np.ndarray
    clock: np.ndarray

    def __len__(self) -> int:
        return len(self.u)

    def state_at(self, u: float) -> Type2State:
        i = int(np.searchsorted(self.u, u, side="right")) - 1
        return self.states[max(i, 0)]

    def rho_at(self, u):
        """Level reached at time ``u`` (linear interpolation of the integrated clock)."""
        return np.interp(u, self.clock, self.level_grid)

    def rho_inverse(self, y):
        """Time at which level ``y`` is reached."""
        return np.interp(y, self.level_grid, self.clock)

    def three_mass(self) -> np.ndarray:
        return np.array([s.three_mass() for s in self.states]).reshape(-1, 3)

    def to_rows(self, path_id: int, jump_flags: Optional[np.ndarray] = None) -> List[tuple]:
        flags = np.zeros(len(self.u), dtype=int) if jump_flags is None else jump_flags
        return [
            (path_id, float(u), s.m1, s.m2, s.alpha.total_mass, len(s.alpha), int(flag))
            for u, s, flag in zip(self.u, self.states, flags)
        ]


def integrated_clock(levels: np.ndarray, masses: np.ndarray) -> np.ndarray:
    """Trapezoidal integral of ``1 / mass`` along ``levels``."""
    inverse = 1.0 / masses
    steps = 0.5 * (inverse[1:] + inverse[:-1]) * np.diff(levels)
    return np.concatenate(([0.0], np.cumsum(steps)))


def depoissonize(
    path: Type2Path, du: float = DEFAULT_DU, horizon_u: float = math.inf
) -> DePoissonizedPath:
    """Time-change ``path`` by the inverse of the integral of ``1 / total mass`` and normalize.

    Only recorded levels with positive total mass are used.
    """
    if du <= 0:
        raise DePoissonizationError(f"du must be positive, got {du}")
    masses = path.total_mass()
    alive = masses > 0
    if not alive.any():
        raise DePoissonizationError("Path has no level with positive mass")
    last = int(np.flatnonzero(alive)[-1])
    if not alive[: last + 1].all():
        raise DePoissonizationError("Total mass vanishes before the end of the recorded path")
    levels = path.levels[: last + 1]
    clock = integrated_clock(levels, masses[: last + 1])
    end = min(float(clock[-1]), horizon_u)
    u = np.arange(0.0, end + 0.5 * du, du)
    u = u[u <= end]
    rho = np.interp(u, clock, levels)
    states = tuple(path.state_at(float(y)).normalized() for y in rho)

    absorption = None
    if path.degeneration_level is not None and path.degeneration_level <= levels[-1]:
        absorption = float(np.interp(path.degeneration_level, levels, clock))
    logger.debug("De-Poissonized %d levels into %d times up to u=%.4f", len(levels), len(u), end)
    return DePoissonizedPath(u, states, rho, absorption, levels, clock)
