"""Resampling 2-tree evolution: de-Poissonized type-2 segments restarted from the stationary law."""

import logging
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from skewer_lab.depoisson.time_change import DEFAULT_DU, DePoissonizationError, depoissonize
from skewer_lab.kernels.samplers import sample_dirichlet_half
from skewer_lab.type2 import (
    DEFAULT_DY,
    DEFAULT_N_APPROX,
    DEFAULT_SCALE_UNIT,
    Type2State,
    sample_scaled_pdip,
    type2_deletion_clocking,
)

logger = logging.getLogger(__name__)

UNIT_MASS_TOLERANCE = 1e-6
MAX_SEGMENTS = 100_000


@dataclass(frozen=True)
class TwoTreePath:
    """Unit-mass states on a time grid with the resampling times."""

    u: np.ndarray
    states: Tuple[Type2State, ...]
    jump_times: Tuple[float, ...]
    jump_flags: np.ndarray

    def __len__(self) -> int:
        return len(self.u)

    def state_at(self, u: float) -> Type2State:
        i = int(np.searchsorted(self.u, u, side="right")) - 1
        return self.states[max(i, 0)]

    def three_mass(self) -> np.ndarray:
        return np.array([s.three_mass() for s in self.states]).reshape(-1, 3)

    def to_rows(self, path_id: int) -> List[tuple]:
        return [
            (path_id, float(u), s.m1, s.m2, s.alpha.total_mass, len(s.alpha), int(flag))
            for u, s, flag in zip(self.u, self.states, self.jump_flags)
        ]


def sample_stationary_state(
    rng: np.random.Generator, n_approx: int = DEFAULT_N_APPROX
) -> Type2State:
    """Dir(1/2, 1/2, 1/2) masses with the third spread as a PDIP(1/2, 1/2)."""
    a1, a2, a3 = sample_dirichlet_half(rng)
    return Type2State(a1, a2, sample_scaled_pdip(a3, 0.5, rng, n_approx))


def resampling_2tree(
    initial: Type2State,
    horizon_u: float,
    du: float,
    rng: np.random.Generator,
    scale_unit: float = DEFAULT_SCALE_UNIT,
    dy: float = DEFAULT_DY,
    n_approx: int = DEFAULT_N_APPROX,
    max_segments: int = MAX_SEGMENTS,
) -> TwoTreePath:
    """Run de-Poissonized deletion-clocking segments up to degeneration and resample in between."""
    if not math.isclose(initial.total_mass, 1.0, abs_tol=UNIT_MASS_TOLERANCE):
        raise DePoissonizationError(f"Initial state must have unit mass, got {initial.total_mass}")
    du = du or DEFAULT_DU
    times: List[float] = []
    states: List[Type2State] = []
    flags: List[int] = []
    jumps: List[float] = []
    offset, state, jumped = 0.0, initial, 0
    for _ in range(max_segments):
        if offset > horizon_u:
            break
        path = type2_deletion_clocking(
            state.m1, state.m2, state.alpha, scale_unit, rng, dy=dy, stop_at_degeneration=True
        )
        segment = depoissonize(path, du, horizon_u - offset)
        end = segment.absorption_time
        if end is None:
            end = float(segment.clock[-1])
        for k, i in enumerate(np.flatnonzero(segment.u < end)):
            times.append(offset + float(segment.u[i]))
            states.append(segment.states[i])
            flags.append(jumped if k == 0 else 0)
        offset += end
        if offset > horizon_u:
            break
        jumps.append(offset)
        state, jumped = sample_stationary_state(rng, n_approx), 1
        logger.debug("Resampled at u=%.4f", offset)
    else:
        logger.warning("Stopped after %d segments before reaching u=%.4f", max_segments, horizon_u)
    logger.info("2-tree path: %d resampling times up to u=%.4f", len(jumps), horizon_u)
    return TwoTreePath(np.asarray(times), tuple(states), tuple(jumps), np.asarray(flags, dtype=int))
