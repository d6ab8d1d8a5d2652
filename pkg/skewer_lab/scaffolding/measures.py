"""Marked point measures of spindles, clades, type-1/type-0 data and the skewer map.

Measures are built from the splitting trees of :mod:`skewer_lab.chains` at scale 1/n: masses are
multiplied by ``scale_unit``, levels by ``scale_unit / 2`` and contour times by
``(scale_unit / 2) ** 1.5``.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from skewer_lab.chains.crp import CrpParams
from skewer_lab.chains.splitting import (
    SplittingTree,
    TableNode,
    birth_death_lifeline,
    build_splitting_tree,
    to_jccp,
)
from skewer_lab.partitions import IntervalPartition, concatenate
from skewer_lab.scaffolding.spindles import (
    ScaffoldingError,
    SpindlePath,
    level_unit,
    time_unit,
)

logger = logging.getLogger(__name__)

# relative distance below which a mass counts as already on the lattice
LATTICE_TOLERANCE = 1e-9


def initial_population(
    x: float, scale_unit: float, rng: Optional[np.random.Generator] = None
) -> int:
    """Lattice population for mass ``x``.

    With ``rng`` the fractional part of ``x / scale_unit`` is rounded up with that probability,
    so the mean population is exactly ``x / scale_unit``; without it the nearest integer is
    taken. Masses below one unit may get no customer.
    """
    if x <= 0:
        return 0
    units = x / scale_unit
    nearest = round(units)
    if rng is None or abs(units - nearest) <= LATTICE_TOLERANCE * max(1.0, units):
        return int(nearest)
    floor = math.floor(units)
    return floor + int(rng.random() < units - floor)


@dataclass(frozen=True)
class MarkedScaffolding:
    """Spindles at strictly increasing scaffolding times.

    The scaffolding starts at ``start_level``, jumps up by each spindle's lifetime at the
    spindle's time (from its birth level) and decreases at rate ``drift`` in between.
    ``scale_unit`` is the lattice scale, or ``None`` for a continuum measure whose spindles all
    have lifetime above ``cutoff``.
    """

    times: np.ndarray
    spindles: Tuple[SpindlePath, ...]
    scale_unit: Optional[float]
    drift: float
    end_time: float
    start_level: float = 0.0
    cutoff: float = 0.0

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        object.__setattr__(self, "times", times)
        if len(times) != len(self.spindles):
            raise ScaffoldingError("Each point needs exactly one spindle")
        if np.any(np.diff(times) <= 0):
            raise ScaffoldingError("Point times must be strictly increasing")
        object.__setattr__(self, "births", np.array([s.birth for s in self.spindles]))
        object.__setattr__(self, "deaths", np.array([s.death for s in self.spindles]))

    def __len__(self) -> int:
        return len(self.spindles)

    @property
    def levels_before(self) -> np.ndarray:
        return self.births

    @property
    def levels_after(self) -> np.ndarray:
        return self.deaths

    @property
    def max_level(self) -> float:
        return float(self.deaths.max()) if len(self) else self.start_level

    def path_at(self, t: float) -> float:
        """Scaffolding value at time ``t`` (right-continuous)."""
        i = int(np.searchsorted(self.times, t, side="right")) - 1
        if i < 0:
            return self.start_level - self.drift * t
        return float(self.deaths[i] - self.drift * (t - self.times[i]))

    def alive_indices(self, y: float, start: int = 0, stop: Optional[int] = None) -> np.ndarray:
        births, deaths = self.births[start:stop], self.deaths[start:stop]
        return start + np.flatnonzero((births <= y) & (y < deaths))

    def skewer(self, y: float, start: int = 0, stop: Optional[int] = None) -> IntervalPartition:
        """Cross-sections at level ``y`` of spindles ``start:stop``, in time order."""
        masses = [self.spindles[i].value_at(y) for i in self.alive_indices(y, start, stop)]
        return IntervalPartition.from_masses(masses)

    def aggregate_mass(self, y: float, t: float = math.inf) -> float:
        """Total mass at level ``y`` of spindles at times up to ``t``."""
        stop = int(np.searchsorted(self.times, t, side="right"))
        return math.fsum(self.spindles[i].value_at(y) for i in self.alive_indices(y, 0, stop))

    def concatenate(self, other: "MarkedScaffolding") -> "MarkedScaffolding":
        """``self`` followed by ``other``; both must run at the same drift."""
        if not other.spindles:
            return self
        if not self.spindles and self.end_time == 0:
            return other
        if not math.isclose(self.drift, other.drift):
            raise ScaffoldingError("Cannot concatenate scaffoldings with different drifts")
        return MarkedScaffolding(
            np.concatenate((self.times, other.times + self.end_time)),
            self.spindles + other.spindles,
            self.scale_unit,
            self.drift,
            self.end_time + other.end_time,
            self.start_level,
            self.cutoff,
        )

    def restrict(self, t0: float, t1: float = math.inf) -> "MarkedScaffolding":
        """Points at times in ``[t0, t1)``, shifted to start at time 0."""
        lo = int(np.searchsorted(self.times, t0, side="left"))
        hi = int(np.searchsorted(self.times, t1, side="left"))
        end = min(t1, self.end_time) - t0
        if lo < len(self) and self.times[lo] == t0:
            start = float(self.births[lo])
        else:
            start = self.path_at(t0) if t0 > 0 else self.start_level
        return MarkedScaffolding(
            self.times[lo:hi] - t0,
            self.spindles[lo:hi],
            self.scale_unit,
            self.drift,
            max(end, 0.0),
            start,
            self.cutoff,
        )

    def scaffolding_rows(self) -> List[Tuple[float, float, float, int]]:
        return [
            (float(t), float(b), float(d), i)
            for i, (t, b, d) in enumerate(zip(self.times, self.births, self.deaths))
        ]

    def spindle_rows(self) -> List[Tuple[int, float, float]]:
        rows = []
        for i, spindle in enumerate(self.spindles):
            for rel, value in zip(spindle.times, spindle.values):
                rows.append((i, float(spindle.birth + rel), float(value)))
        return rows


def empty_scaffolding(scale_unit: float) -> MarkedScaffolding:
    drift = level_unit(scale_unit) / time_unit(scale_unit)
    return MarkedScaffolding(np.zeros(0), (), scale_unit, drift, 0.0)


def scaffolding_from_tree(tree: SplittingTree, scale_unit: float) -> MarkedScaffolding:
    """Scale the contour of ``tree`` into a marked scaffolding."""
    jccp = to_jccp(tree)
    lu, tu = level_unit(scale_unit), time_unit(scale_unit)
    spindles = tuple(SpindlePath.from_table(node, scale_unit) for node in jccp.spindles)
    start = float(jccp.levels_before[0] + jccp.times[0]) if len(jccp) else 0.0
    return MarkedScaffolding(
        jccp.times * tu, spindles, scale_unit, lu / tu, jccp.total_time * tu, start * lu
    )


def sample_clade(x0: float, scale_unit: float, rng: np.random.Generator) -> MarkedScaffolding:
    """Clade of initial mass ``x0``: a birth–death spindle and all its descendants."""
    return sample_type1_measure(IntervalPartition.from_masses([x0]), scale_unit, rng)


def sample_type1_measure(
    beta: IntervalPartition, scale_unit: float, rng: np.random.Generator
) -> MarkedScaffolding:
    """Independent clades, one per block of ``beta``, concatenated in block order."""
    pops = [initial_population(x, scale_unit, rng) for x in beta.masses]
    pops = [p for p in pops if p > 0]
    if not pops:
        return empty_scaffolding(scale_unit)
    tree = build_splitting_tree(CrpParams.HALF_ZERO, rng, initial_tables=pops)
    return scaffolding_from_tree(tree, scale_unit)


def sample_immigrants(
    depth: float, scale_unit: float, rng: np.random.Generator
) -> MarkedScaffolding:
    """Left measure: immigrant clades born below level ``depth``, newest (highest) leftmost.

    Its scaffolding descends from the highest immigrant birth level to 0.
    """
    if depth <= 0:
        return empty_scaffolding(scale_unit)
    tree = build_splitting_tree(
        CrpParams.HALF_HALF,
        rng,
        initial_tables=(),
        immigration_horizon=depth / level_unit(scale_unit),
    )
    if not tree.nodes:
        return empty_scaffolding(scale_unit)
    return scaffolding_from_tree(tree, scale_unit)


def clade_from_left(f: SpindlePath, left: MarkedScaffolding) -> MarkedScaffolding:
    """The spindle ``f`` at time 0 followed by the part of ``left`` below level ``f.death``."""
    if f.lifetime <= 0:
        return empty_scaffolding(left.scale_unit)
    drift = left.drift
    keep = np.flatnonzero(left.births < f.death)
    if len(keep) and keep[0] != 0:
        first = int(keep[0])
        # descent of the left measure from the level where it crosses f.death
        t0 = left.times[first] - (f.death - left.births[first]) / drift
        times = left.times[first:] - t0
        spindles = left.spindles[first:]
        end = left.end_time - t0
    elif len(keep):
        shift = (f.death - left.start_level) / drift
        times, spindles, end = left.times + shift, left.spindles, left.end_time + shift
    else:
        times, spindles, end = np.zeros(0), (), f.death / drift
    # the first retained jump starts below f.death, so it comes strictly after time 0
    return MarkedScaffolding(
        np.concatenate(([0.0], times)),
        (f,) + tuple(spindles),
        left.scale_unit,
        drift,
        end,
        0.0,
    )


def birth_death_spindle(
    x0: float, scale_unit: float, rng: np.random.Generator, birth: float = 0.0
) -> SpindlePath:
    """Scaled birth–death spindle started from the lattice population of ``x0``."""
    times, pops = birth_death_lifeline(initial_population(x0, scale_unit, rng), rng)
    return SpindlePath.from_table(TableNode(-1, None, 0.0, times, pops), scale_unit, birth)


@dataclass(frozen=True)
class Type0Data:
    """Left immigrant measure and right type-1 measure; valid for levels up to ``depth_cutoff``."""

    left: MarkedScaffolding
    right: MarkedScaffolding
    depth_cutoff: float

    def skewer(self, y: float) -> IntervalPartition:
        if y > self.depth_cutoff:
            raise ScaffoldingError(f"Level {y} is beyond the generated depth {self.depth_cutoff}")
        return concatenate(self.left.skewer(y), self.right.skewer(y))

    def total_mass(self, y: float) -> float:
        return self.skewer(y).total_mass


@dataclass(frozen=True)
class Type1Data:
    """External spindle ``f``, left immigrant measure down from ``f.death``, and ``right``."""

    f: SpindlePath
    left: MarkedScaffolding
    right: MarkedScaffolding

    def star(self) -> MarkedScaffolding:
        """``clade(f, left)`` followed by ``right``: a type-1 measure from ``[f(0)] + right``."""
        return clade_from_left(self.f, self.left).concatenate(self.right)


def sample_type0_data(
    beta: IntervalPartition, scale_unit: float, depth_cutoff: float, rng: np.random.Generator
) -> Type0Data:
    """Type-0 data from ``beta``; immigrants are generated down from ``depth_cutoff``."""
    left = sample_immigrants(depth_cutoff, scale_unit, rng)
    right = sample_type1_measure(beta, scale_unit, rng)
    return Type0Data(left, right, depth_cutoff)


def sample_type1_data(
    a: float,
    beta: IntervalPartition,
    scale_unit: float,
    rng: np.random.Generator,
    f: Optional[SpindlePath] = None,
) -> Type1Data:
    """Type-1 data with external spindle from ``a`` (or the given ``f``) and clades of ``beta``."""
    if f is None:
        f = birth_death_spindle(a, scale_unit, rng)
    left = sample_immigrants(f.death, scale_unit, rng)
    right = sample_type1_measure(beta, scale_unit, rng)
    return Type1Data(f, left, right)


def skewer(y: float, measure: MarkedScaffolding) -> IntervalPartition:
    return measure.skewer(y)


def aggregate_mass(y: float, measure: MarkedScaffolding, t: float = math.inf) -> float:
    return measure.aggregate_mass(y, t)


def total_mass_path(measure: MarkedScaffolding, levels: Iterable[float]) -> np.ndarray:
    """Skewer total mass at each of ``levels``."""
    levels = np.asarray(list(levels), dtype=float)
    stacked = np.zeros(len(levels))
    for spindle in measure.spindles:
        stacked += spindle.values_at(levels)
    return stacked


def concatenate_measures(measures: Sequence[MarkedScaffolding]) -> MarkedScaffolding:
    result = measures[0]
    for measure in measures[1:]:
        result = result.concatenate(measure)
    return result
