"""Spindles: nonnegative excursions in level, born at an absolute level."""

import math
from dataclasses import dataclass

import numpy as np

from skewer_lab.chains.splitting import TableNode
from skewer_lab.kernels.besq import BesqPath


class ScaffoldingError(ValueError):
    """Invalid scaffolding construction or query."""


def level_unit(scale_unit: float) -> float:
    """Level step of one unscaled time unit at mass scale ``scale_unit``.

    With masses scaled by 1/n and levels by 1/(2n) the birth–death rates (m down, m - 1/2 up)
    turn into BESQ(-1) dynamics dX = -dy + 2 sqrt(X) dB.
    """
    return 0.5 * scale_unit


def time_unit(scale_unit: float) -> float:
    """Scaffolding time step of one unscaled contour time unit."""
    return level_unit(scale_unit) ** 1.5


@dataclass(frozen=True)
class SpindlePath:
    """Spindle born at ``birth`` with values ``values[i]`` from relative level ``times[i]``.

    Piecewise constant (right-continuous) for birth–death spindles; linearly interpolated for
    BESQ grids. ``times[-1]`` is the lifetime and ``values[-1]`` is 0.
    """

    birth: float
    times: np.ndarray
    values: np.ndarray
    interpolate: bool = False

    @property
    def lifetime(self) -> float:
        return float(self.times[-1])

    @property
    def death(self) -> float:
        return self.birth + self.lifetime

    @property
    def initial(self) -> float:
        return float(self.values[0]) if self.lifetime > 0 else 0.0

    def value_at(self, y: float) -> float:
        """Mass at absolute level ``y``; 0 outside ``[birth, death)``."""
        rel = y - self.birth
        if rel < 0 or rel >= self.lifetime:
            return 0.0
        if self.interpolate:
            return float(np.interp(rel, self.times, self.values))
        return float(self.values[np.searchsorted(self.times, rel, side="right") - 1])

    def values_at(self, levels: np.ndarray) -> np.ndarray:
        rel = np.asarray(levels, dtype=float) - self.birth
        inside = (rel >= 0) & (rel < self.lifetime)
        if self.interpolate:
            out = np.interp(rel, self.times, self.values)
        else:
            idx = np.searchsorted(self.times, rel, side="right") - 1
            idx = np.clip(idx, 0, len(self.values) - 1)
            out = self.values[idx]
        return np.where(inside, out, 0.0)

    def cut_below(self, level: float) -> "SpindlePath":
        """The part of the spindle at absolute levels >= ``level``, born at ``level``."""
        if level <= self.birth:
            return self
        if level >= self.death:
            return SpindlePath(level, np.zeros(1), np.zeros(1), self.interpolate)
        rel = level - self.birth
        keep = self.times > rel
        times = np.concatenate(([0.0], self.times[keep] - rel))
        values = np.concatenate(([self.value_at(level)], self.values[keep]))
        return SpindlePath(level, times, values, self.interpolate)

    def shifted(self, birth: float) -> "SpindlePath":
        return SpindlePath(birth, self.times, self.values, self.interpolate)

    def scaled(self, c: float) -> "SpindlePath":
        """BESQ scaling: mass and level both multiplied by ``c``."""
        return SpindlePath(c * self.birth, c * self.times, c * self.values, self.interpolate)

    @classmethod
    def from_table(cls, node: TableNode, scale_unit: float, birth_offset: float = 0.0):
        unit = level_unit(scale_unit)
        return cls(
            birth_offset + node.birth * unit,
            np.asarray(node.times, dtype=float) * unit,
            np.asarray(node.pops, dtype=float) * scale_unit,
        )

    @classmethod
    def from_besq(cls, path: BesqPath, birth: float = 0.0) -> "SpindlePath":
        """Spindle from an absorbed BESQ grid path."""
        if math.isinf(path.lifetime):
            raise ScaffoldingError("A spindle needs an absorbed path")
        if path.lifetime <= 0:
            return cls(birth, np.zeros(1), np.zeros(1), True)
        levels = path.levels
        inside = levels < path.lifetime
        times = np.concatenate((levels[inside], [path.lifetime]))
        values = np.concatenate((path.values[inside], [0.0]))
        return cls(birth, times, values, True)
