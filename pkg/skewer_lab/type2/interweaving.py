"""Type-2 evolutions by interweaving two independent type-1 scaffoldings.

Each scaffolding is ``clade(f_i, left_i) * N_i`` where ``N_i`` carries the clades of an
independent Gamma(1/2, gamma) multiple of a PDIP(1/2, 1/2). Segments are taken alternately from
the two scaffoldings, each one running until its scaffolding first exceeds the level reached by
the other. This covers initial partitions of that pseudo-stationary form only.
"""

import bisect
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from skewer_lab.kernels.samplers import sample_gamma
from skewer_lab.partitions import IntervalPartition, concatenate_all
from skewer_lab.scaffolding import (
    MarkedScaffolding,
    SpindlePath,
    birth_death_spindle,
    clade_from_left,
    sample_immigrants,
    sample_type1_measure,
)
from skewer_lab.type2.alternating import MAX_CLOCK_CHANGES, absorbed_path
from skewer_lab.type2.initial import (
    DEFAULT_N_APPROX,
    quantize_mass,
    quantize_partition,
    sample_scaled_pdip,
)
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
class InterweavingInputs:
    f1: SpindlePath
    f2: SpindlePath
    n1: MarkedScaffolding
    n2: MarkedScaffolding

    @property
    def type1_lifetimes(self) -> Tuple[float, float]:
        """Levels at which the two type-1 scaffoldings' skewers become empty."""
        return (
            self.n1.max_level if len(self.n1) else 0.0,
            self.n2.max_level if len(self.n2) else 0.0,
        )


def _type1_scaffolding(
    f: SpindlePath, beta: IntervalPartition, scale_unit: float, rng: np.random.Generator
) -> MarkedScaffolding:
    left = sample_immigrants(f.death, scale_unit, rng)
    right = sample_type1_measure(beta, scale_unit, rng)
    return clade_from_left(f, left).concatenate(right)


def sample_interweaving_inputs(
    a: float,
    b: float,
    gamma: float,
    scale_unit: float,
    rng: np.random.Generator,
    n_approx: int = DEFAULT_N_APPROX,
) -> InterweavingInputs:
    f1 = birth_death_spindle(quantize_mass(a, scale_unit, rng), scale_unit, rng)
    f2 = birth_death_spindle(quantize_mass(b, scale_unit, rng), scale_unit, rng)
    parts = []
    for _ in range(2):
        c = float(sample_gamma(0.5, gamma, rng))
        beta = sample_scaled_pdip(c, 0.5, rng, n_approx)
        parts.append(quantize_partition(beta, scale_unit, rng))
    n1 = _type1_scaffolding(f1, parts[0], scale_unit, rng)
    n2 = _type1_scaffolding(f2, parts[1], scale_unit, rng)
    return InterweavingInputs(f1, f2, n1, n2)


def interweave_levels(
    inputs: InterweavingInputs, max_changes: int = MAX_CLOCK_CHANGES
) -> Tuple[List[float], List[Tuple[int, int, int]]]:
    """Exceedance levels ``Z_0 = 0, Z_1 = lifetime(f1), ...`` and the included segments.

    Segments are ``(scaffolding, start, stop)`` index ranges, in skewer order.
    """
    measures = {1: inputs.n1, 2: inputs.n2}
    # index of the previous exceedance in each scaffolding; the external spindle sits at 0
    last: Dict[int, int] = {
        1: 0 if inputs.f1.lifetime > 0 else -1,
        2: 0 if inputs.f2.lifetime > 0 else -1,
    }
    levels = [0.0, inputs.f1.death if inputs.f1.lifetime > 0 else 0.0]
    segments: List[Tuple[int, int, int]] = []
    j = 1
    while True:
        m = 2 if j % 2 else 1
        measure = measures[m]
        search = max(last[m], 0)
        exceed = np.flatnonzero(measure.deaths[search:] > levels[-1])
        if not exceed.size:
            segments.append((m, last[m] + 1, len(measure)))
            return levels, segments
        k = search + int(exceed[0])
        segments.append((m, last[m] + 1, k + 1))
        levels.append(float(measure.deaths[k]))
        last[m] = k
        j += 1
        if j > max_changes:
            raise Type2Error(f"More than {max_changes} interweaving steps")


def _degeneration_level(
    inputs: InterweavingInputs, segments: List[Tuple[int, int, int]]
) -> float:
    """First level where at most one included spindle is alive."""
    measures = {1: inputs.n1, 2: inputs.n2}
    births = [f.birth for f in (inputs.f1, inputs.f2) if f.lifetime > 0]
    deaths = [f.death for f in (inputs.f1, inputs.f2) if f.lifetime > 0]
    for m, start, stop in segments:
        births.extend(measures[m].births[start:stop])
        deaths.extend(measures[m].deaths[start:stop])
    births_sorted, deaths_sorted = np.sort(births), np.sort(deaths)
    candidates = np.concatenate(([0.0], deaths_sorted))
    alive = np.searchsorted(births_sorted, candidates, side="right") - np.searchsorted(
        deaths_sorted, candidates, side="right"
    )
    return float(candidates[np.flatnonzero(alive <= 1)[0]])


def type2_interweaving(
    a: float,
    b: float,
    gamma: float,
    scale_unit: float,
    rng: np.random.Generator,
    dy: float = DEFAULT_DY,
    max_level: float = math.inf,
    beta: Optional[IntervalPartition] = None,
    coupled_inputs: Optional[InterweavingInputs] = None,
    n_approx: int = DEFAULT_N_APPROX,
    stop_at_degeneration: bool = False,
    max_changes: int = MAX_CLOCK_CHANGES,
) -> Type2Path:
    """Interweave two type-1 scaffoldings with tops ``a``, ``b`` and Gamma(1/2, gamma) partitions.

    A prescribed ``beta`` is rejected: the construction only yields a type-2 evolution when the
    initial partition is an independent Gamma(1/2, gamma) multiple of a PDIP(1/2, 1/2).
    """
    if beta is not None:
        raise Type2Error(
            "Interweaving needs a Gamma(1/2, gamma) * PDIP(1/2, 1/2) initial partition; "
            "use deletion clocking or alternating for a prescribed one"
        )
    if gamma <= 0:
        raise Type2Error(f"gamma must be positive, got {gamma}")
    Type2State(a, b)
    if a + b == 0 and coupled_inputs is None:
        return absorbed_path(scale_unit, "interweaving")
    inputs = coupled_inputs or sample_interweaving_inputs(a, b, gamma, scale_unit, rng, n_approx)
    if not len(inputs.n1) and not len(inputs.n2):
        return absorbed_path(scale_unit, "interweaving")

    levels, segments = interweave_levels(inputs, max_changes)
    lifetime = levels[-1]
    measures = {1: inputs.n1, 2: inputs.n2}
    degeneration_level = _degeneration_level(inputs, segments)

    def state_fn(y: float) -> Type2State:
        tops = [f.value_at(y) for f in (inputs.f1, inputs.f2)]
        parts = [IntervalPartition.from_masses(tops)]
        parts += [measures[m].skewer(y, start, stop) for m, start, stop in segments]
        blocks = concatenate_all(parts)
        if blocks.is_empty:
            return Type2State(0.0, 0.0)
        changes = bisect.bisect_right(levels, y) - 1
        return state_from_blocks(blocks.masses[0], blocks.tail(1), changes)

    return record_path(
        state_fn,
        levels,
        degeneration_level,
        lifetime,
        scale_unit,
        "interweaving",
        dy,
        max_level,
        stop_at_degeneration=stop_at_degeneration,
    )
