"""Type-2 evolutions by alternating BESQ(-1) clocks with restarted type-1 companions."""

import bisect
import logging
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from skewer_lab.kernels.besq import DEFAULT_DT, sample_besq_path
from skewer_lab.partitions import IntervalPartition
from skewer_lab.scaffolding import (
    MarkedScaffolding,
    SpindlePath,
    sample_type1_data,
    sample_type1_measure,
)
from skewer_lab.type2.initial import quantize_mass, quantize_partition
from skewer_lab.type2.states import (
    ABSORBED,
    DEFAULT_DY,
    Type2Error,
    Type2Path,
    Type2State,
    record_path,
    state_from_blocks,
)

logger = logging.getLogger(__name__)

DEFAULT_SCALE_UNIT = 1.0 / 256
MAX_CLOCK_CHANGES = 100_000


@dataclass(frozen=True)
class _Stage:
    level: float
    clock: SpindlePath
    companion: MarkedScaffolding
    changes: int


def absorbed_path(scale_unit: float, method: str) -> Type2Path:
    return record_path(lambda y: ABSORBED, (0.0,), None, 0.0, scale_unit, method)


def type2_alternating(
    a: float,
    b: float,
    beta: IntervalPartition,
    dt: float,
    rng: np.random.Generator,
    scale_unit: float = DEFAULT_SCALE_UNIT,
    dy: float = DEFAULT_DY,
    max_level: float = math.inf,
    stop_at_degeneration: bool = False,
    max_changes: int = MAX_CLOCK_CHANGES,
) -> Type2Path:
    """Alternate BESQ(-1) clocks with type-1 companions restarted at every clock level.

    The first clock starts from ``a`` and the first companion from ``(b, beta)``. When a clock
    dies, the companion's top mass starts the next clock and a new companion starts from the
    remaining partition.
    """
    start = Type2State(a, b, beta)
    if start.is_absorbed:
        return absorbed_path(scale_unit, "alternating")
    dt = dt or DEFAULT_DT
    b = quantize_mass(b, scale_unit, rng)
    beta = quantize_partition(beta, scale_unit, rng)
    companion = sample_type1_data(b, beta, scale_unit, rng).star()

    stages: List[_Stage] = []
    level, clock_mass, changes = 0.0, float(a), 0
    degeneration_level: Optional[float] = None
    while True:
        besq = sample_besq_path(clock_mass, -1.0, dt, math.inf, rng)
        clock = SpindlePath.from_besq(besq, birth=level)
        stages.append(_Stage(level, clock, companion, changes))
        companion_end = level + companion.max_level if len(companion) else level
        if companion_end < clock.death:
            degeneration_level = companion_end
            break
        rest = companion.skewer(clock.death - level)
        clock_mass = rest.masses[0]
        companion = sample_type1_measure(rest.tail(1), scale_unit, rng)
        level = clock.death
        changes += 1
        if changes > max_changes:
            raise Type2Error(f"More than {max_changes} clock changes")

    lifetime = stages[-1].clock.death
    stage_levels = [stage.level for stage in stages]

    def state_fn(y: float) -> Type2State:
        stage = stages[bisect.bisect_right(stage_levels, y) - 1]
        rest = stage.companion.skewer(y - stage.level)
        return state_from_blocks(stage.clock.value_at(y), rest, stage.changes)

    clock_levels = stage_levels + [lifetime]
    return record_path(
        state_fn,
        clock_levels,
        degeneration_level,
        lifetime,
        scale_unit,
        "alternating",
        dy,
        max_level,
        stop_at_degeneration=stop_at_degeneration,
    )
