"""Interval partitions stored as ordered block masses with optional diversity annotations."""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)


class PartitionError(ValueError):
    """Invalid interval partition or correspondence."""


@dataclass(frozen=True)
class IntervalPartition:
    """Finite interval partition.

    Blocks are stored left to right by mass only; left endpoints are the prefix sums.
    ``div_left[i]`` is the diversity accumulated strictly to the left of block ``i`` and
    ``total_diversity`` the diversity of the whole partition. Both are optional; a partition
    without annotations behaves as if every diversity were 0.
    """

    masses: Tuple[float, ...] = ()
    div_left: Optional[Tuple[float, ...]] = None
    total_diversity: Optional[float] = None

    def __post_init__(self):
        masses = tuple(float(m) for m in self.masses)
        object.__setattr__(self, "masses", masses)
        for m in masses:
            if not m > 0 or not math.isfinite(m):
                raise PartitionError(f"Block masses must be positive and finite, got {m}")

        if self.div_left is not None:
            div_left = tuple(float(d) for d in self.div_left)
            if len(div_left) != len(masses):
                raise PartitionError(
                    f"Expected {len(masses)} diversity annotations, got {len(div_left)}"
                )
            if any(d < 0 for d in div_left):
                raise PartitionError("Diversity annotations must be nonnegative")
            if any(b < a for a, b in zip(div_left, div_left[1:])):
                raise PartitionError("Diversity annotations must be nondecreasing")
            object.__setattr__(self, "div_left", div_left)

        if self.total_diversity is not None:
            total = float(self.total_diversity)
            if total < 0:
                raise PartitionError("Total diversity must be nonnegative")
            if self.div_left and total < self.div_left[-1]:
                raise PartitionError("Total diversity is smaller than the last annotation")
            object.__setattr__(self, "total_diversity", total)

    @classmethod
    def from_masses(cls, masses: Iterable[float]) -> "IntervalPartition":
        """Build an unannotated partition, silently dropping zero-mass entries."""
        return cls(tuple(float(m) for m in masses if m > 0))

    def __len__(self) -> int:
        return len(self.masses)

    @property
    def is_empty(self) -> bool:
        return not self.masses

    @property
    def annotated(self) -> bool:
        return self.div_left is not None

    @property
    def total_mass(self) -> float:
        return math.fsum(self.masses)

    @property
    def diversity(self) -> float:
        """Total diversity, 0 when absent."""
        return self.total_diversity if self.total_diversity is not None else 0.0

    def diversity_at(self, index: int) -> float:
        """Diversity to the left of block ``index``, 0 when absent."""
        if self.div_left is None:
            return 0.0
        return self.div_left[index]

    def left_endpoints(self) -> np.ndarray:
        if not self.masses:
            return np.zeros(0)
        return np.concatenate(([0.0], np.cumsum(self.masses)[:-1]))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.masses, dtype=float)

    def without_diversity(self) -> "IntervalPartition":
        return IntervalPartition(self.masses)

    def tail(self, start: int) -> "IntervalPartition":
        """Blocks from ``start`` onwards, diversities shifted to start at 0."""
        if self.div_left is None:
            return IntervalPartition(self.masses[start:])
        if start >= len(self.masses):
            return IntervalPartition((), (), 0.0)
        offset = self.div_left[start]
        return IntervalPartition(
            self.masses[start:],
            tuple(d - offset for d in self.div_left[start:]),
            self.diversity - offset,
        )


EMPTY = IntervalPartition()


def diversity_estimate(beta: IntervalPartition, h: float, t: Optional[int] = None) -> float:
    """Estimate the diversity of ``beta`` to the left of block position ``t``.

    Counts blocks of mass greater than ``h`` among ``beta.masses[:t]`` and multiplies by
    ``sqrt(pi * h)``. ``t=None`` means the whole partition.
    """
    if h <= 0:
        raise PartitionError(f"Diversity threshold must be positive, got {h}")
    masses = beta.masses if t is None else beta.masses[:t]
    count = sum(1 for m in masses if m > h)
    return math.sqrt(math.pi * h) * count


def annotate_diversity(beta: IntervalPartition, h: float) -> IntervalPartition:
    """Return ``beta`` with every diversity annotation filled in by the estimator."""
    if h <= 0:
        raise PartitionError(f"Diversity threshold must be positive, got {h}")
    unit = math.sqrt(math.pi * h)
    counts = np.cumsum([m > h for m in beta.masses]) if beta.masses else np.zeros(0, dtype=int)
    div_left = tuple(unit * float(c) for c in np.concatenate(([0], counts[:-1])))[: len(beta)]
    total = unit * float(counts[-1]) if len(counts) else 0.0
    return IntervalPartition(beta.masses, div_left, total)


def concatenate(beta: IntervalPartition, gamma: IntervalPartition) -> IntervalPartition:
    """Blocks of ``beta`` followed by blocks of ``gamma``.

    If either side is annotated, the result is annotated with missing values read as 0 and the
    diversities of ``gamma`` shifted by the total diversity of ``beta``.
    """
    masses = beta.masses + gamma.masses
    if not (beta.annotated or gamma.annotated):
        return IntervalPartition(masses)
    shift = beta.diversity
    left = beta.div_left if beta.div_left is not None else (0.0,) * len(beta)
    right = gamma.div_left if gamma.div_left is not None else (0.0,) * len(gamma)
    if beta.div_left is None and gamma.div_left is not None and shift > 0:
        logger.debug("Concatenating unannotated partition with annotated one")
    return IntervalPartition(
        masses,
        left + tuple(shift + d for d in right),
        shift + gamma.diversity,
    )


def concatenate_all(parts: Sequence[IntervalPartition]) -> IntervalPartition:
    result = EMPTY
    for part in parts:
        result = concatenate(result, part)
    return result


def scale(c: float, beta: IntervalPartition) -> IntervalPartition:
    """Scale masses by ``c`` and diversities by ``sqrt(c)``."""
    if c <= 0:
        raise PartitionError(f"Scale factor must be positive, got {c}")
    root = math.sqrt(c)
    return IntervalPartition(
        tuple(c * m for m in beta.masses),
        None if beta.div_left is None else tuple(root * d for d in beta.div_left),
        None if beta.total_diversity is None else root * beta.total_diversity,
    )
