"""Truncated Poisson random measure of spindles with lifetimes above a threshold.

Lifetimes follow the density 3 / (2 pi sqrt 2) * y^(-5/2) restricted to ``(z, inf)``. The
scaffolding is the jump sum compensated at rate 3 z^(-1/2) / (pi sqrt 2).
"""

import logging
import math
from typing import Callable, Optional

import numpy as np

from skewer_lab.kernels.besq import sample_besq_path
from skewer_lab.scaffolding.measures import MarkedScaffolding
from skewer_lab.scaffolding.spindles import ScaffoldingError, SpindlePath

logger = logging.getLogger(__name__)

LIFETIME_DENSITY_CONSTANT = 3.0 / (2.0 * math.pi * math.sqrt(2.0))
SHAPE_DT = 1e-3

ShapeSampler = Callable[[float, np.random.Generator], SpindlePath]


def arrival_rate(z: float) -> float:
    """Rate per unit time of spindles with lifetime above ``z``."""
    return z**-1.5 / (math.pi * math.sqrt(2.0))


def compensation_rate(z: float) -> float:
    return 3.0 * z**-0.5 / (math.pi * math.sqrt(2.0))


def lifetime_tail(u, z: float):
    """P(lifetime > u | lifetime > z)."""
    u = np.asarray(u, dtype=float)
    out = np.where(u > z, (z / np.maximum(u, z)) ** 1.5, 1.0)
    return out if out.ndim else float(out)


def sample_lifetimes(z: float, rng: np.random.Generator, size: int) -> np.ndarray:
    """Pareto(3/2) lifetimes above ``z``."""
    u = 1.0 - rng.random(size)
    return z * u ** (-2.0 / 3.0)


def reversed_besq_shape(lifetime: float, rng: np.random.Generator) -> SpindlePath:
    """Approximate spindle of the given lifetime.

    A time-reversed BESQ_1(-1) path is followed by an independent one, then both mass and level
    are rescaled so the total lifetime matches.
    """
    rise = sample_besq_path(1.0, -1.0, SHAPE_DT, math.inf, rng)
    fall = sample_besq_path(1.0, -1.0, SHAPE_DT, math.inf, rng)
    up = SpindlePath.from_besq(rise)
    down = SpindlePath.from_besq(fall)
    up_levels = up.lifetime - up.times[::-1]
    times = np.concatenate((up_levels, up.lifetime + down.times[1:]))
    values = np.concatenate((up.values[::-1], down.values[1:]))
    raw = SpindlePath(0.0, times, values, True)
    return raw.scaled(lifetime / raw.lifetime)


def prm_truncated_mode(
    z_threshold: float,
    horizon: float,
    rng: np.random.Generator,
    shape_sampler: Optional[ShapeSampler] = None,
) -> MarkedScaffolding:
    """Spindles with lifetime above ``z_threshold`` on ``[0, horizon]`` and their scaffolding."""
    if z_threshold <= 0:
        raise ScaffoldingError(f"z_threshold must be positive, got {z_threshold}")
    if horizon < 0:
        raise ScaffoldingError(f"horizon must be nonnegative, got {horizon}")
    shape_sampler = shape_sampler or reversed_besq_shape
    drift = compensation_rate(z_threshold)
    count = int(rng.poisson(arrival_rate(z_threshold) * horizon)) if horizon > 0 else 0
    times = np.sort(rng.uniform(0.0, horizon, size=count))
    lifetimes = sample_lifetimes(z_threshold, rng, count)
    before = np.concatenate(([0.0], np.cumsum(lifetimes)[:-1])) - drift * times
    spindles = tuple(
        shape_sampler(float(life), rng).shifted(float(level))
        for life, level in zip(lifetimes, before)
    )
    logger.debug("Truncated PRM: %d spindles above %.4g up to t=%.4g", count, z_threshold, horizon)
    return MarkedScaffolding(times, spindles, None, drift, float(horizon), 0.0, cutoff=z_threshold)
