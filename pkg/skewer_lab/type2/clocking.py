"""Type-2 evolutions by deletion clocking of a single scaffolding.

The scaffolding is ``clade(f2, left) * right``. Clock levels are found by first exceedances of
the scaffolding above the current clock level; the spindle that exceeds is cut at that level and
becomes the next clock, and everything up to the next return of the scaffolding to the old clock
level is deleted.
"""

import bisect
import logging
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from skewer_lab.partitions import IntervalPartition
from skewer_lab.scaffolding import (
    MarkedScaffolding,
    SpindlePath,
    birth_death_spindle,
    clade_from_left,
    sample_immigrants,
    sample_type1_measure,
)
from skewer_lab.type2.alternating import MAX_CLOCK_CHANGES, absorbed_path
from skewer_lab.type2.initial import quantize_mass, quantize_partition
from skewer_lab.type2.states import (
    DEFAULT_DY,
    Type2Error,
    Type2Path,
    Type2State,
    record_path,
    state_from_blocks,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClockingInputs:
    """Two external spindles, an immigrant measure reaching below both, and the clades of beta."""

    f1: SpindlePath
    f2: SpindlePath
    left: MarkedScaffolding
    right: MarkedScaffolding


@dataclass(frozen=True)
class _Stage:
    level: float
    clock: SpindlePath
    rest_start: int
    changes: int


def sample_clocking_inputs(
    a: float,
    b: float,
    beta: IntervalPartition,
    scale_unit: float,
    rng: np.random.Generator,
) -> ClockingInputs:
    f1 = birth_death_spindle(quantize_mass(a, scale_unit, rng), scale_unit, rng)
    f2 = birth_death_spindle(quantize_mass(b, scale_unit, rng), scale_unit, rng)
    left = sample_immigrants(max(f1.death, f2.death), scale_unit, rng)
    right = sample_type1_measure(quantize_partition(beta, scale_unit, rng), scale_unit, rng)
    return ClockingInputs(f1, f2, left, right)


def _clock_stages(
    first: SpindlePath, measure: MarkedScaffolding, max_changes: int
) -> List[_Stage]:
    births, deaths = measure.births, measure.deaths
    stages = [_Stage(0.0, first, 0, 0)]
    level, start = first.death, 0
    while True:
        exceed = np.flatnonzero(deaths[start:] > level)
        if not exceed.size:
            return stages
        k = start + int(exceed[0])
        back = np.flatnonzero(births[k + 1 :] <= level)
        start = k + 1 + int(back[0]) if back.size else len(measure)
        stages.append(_Stage(level, measure.spindles[k].cut_below(level), start, len(stages)))
        level = float(deaths[k])
        if len(stages) > max_changes:
            raise Type2Error(f"More than {max_changes} clock changes")


def _degeneration_level(stages: List[_Stage], measure: MarkedScaffolding) -> float:
    """First stage whose remaining spindles all die before its clock does."""
    for stage in stages:
        tail = measure.deaths[stage.rest_start :]
        rest_end = max(stage.level, float(tail.max())) if tail.size else stage.level
        if rest_end < stage.clock.death:
            return rest_end
    return stages[-1].clock.death


def type2_deletion_clocking(
    a: float,
    b: float,
    beta: IntervalPartition,
    scale_unit: float,
    rng: np.random.Generator,
    dy: float = DEFAULT_DY,
    max_level: float = math.inf,
    coupled_inputs: Optional[ClockingInputs] = None,
    swap_roles: bool = False,
    stop_at_degeneration: bool = False,
    max_changes: int = MAX_CLOCK_CHANGES,
) -> Type2Path:
    """Deletion clocking from ``(a, b, beta)``.

    ``coupled_inputs`` replaces the sampled spindles and measures. With ``swap_roles`` the
    scaffolding is built on ``f1``, ``f2`` is the first clock and the labels start from m2; the
    resulting path is the same.
    """
    Type2State(a, b, beta)
    if coupled_inputs is None:
        if a + b == 0:
            return absorbed_path(scale_unit, "deletion_clocking")
        coupled_inputs = sample_clocking_inputs(a, b, beta, scale_unit, rng)
    inputs = coupled_inputs
    if inputs.f1.lifetime == 0 and inputs.f2.lifetime == 0 and not len(inputs.right):
        return absorbed_path(scale_unit, "deletion_clocking")

    first, base, first_clock = inputs.f1, inputs.f2, 1
    if swap_roles:
        first, base, first_clock = inputs.f2, inputs.f1, 2
    measure = clade_from_left(base, inputs.left).concatenate(inputs.right)
    stages = _clock_stages(first, measure, max_changes)
    lifetime = stages[-1].clock.death
    degeneration_level = _degeneration_level(stages, measure)
    stage_levels = [stage.level for stage in stages]

    def state_fn(y: float) -> Type2State:
        stage = stages[bisect.bisect_right(stage_levels, y) - 1]
        rest = measure.skewer(y, start=stage.rest_start)
        return state_from_blocks(stage.clock.value_at(y), rest, stage.changes, first_clock)

    return record_path(
        state_fn,
        stage_levels + [lifetime],
        degeneration_level,
        lifetime,
        scale_unit,
        "deletion_clocking",
        dy,
        max_level,
        first_clock,
        stop_at_degeneration,
    )
