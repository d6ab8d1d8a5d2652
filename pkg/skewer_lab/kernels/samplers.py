"""Elementary samplers: Gamma, Beta, Dirichlet, clock lifetimes, overshoot ratios and PDIPs."""

import logging
import math
from typing import Optional, Tuple, Union

import numpy as np

from skewer_lab.partitions import IntervalPartition, annotate_diversity

logger = logging.getLogger(__name__)

ArrayOrFloat = Union[float, np.ndarray]


class SamplerError(ValueError):
    """Invalid sampler parameters."""


def draw_seed(rng: np.random.Generator) -> int:
    """Seed for a compiled kernel, taken from ``rng``."""
    return int(rng.integers(0, 2**32 - 1))


def sample_gamma(
    shape: float, rate: float, rng: np.random.Generator, size: Optional[int] = None
) -> ArrayOrFloat:
    if shape <= 0 or rate <= 0:
        raise SamplerError(f"Gamma parameters must be positive, got shape={shape} rate={rate}")
    return rng.gamma(shape, 1.0 / rate, size=size)


def sample_beta(a: float, b: float, rng: np.random.Generator, size: Optional[int] = None):
    if a <= 0 or b <= 0:
        raise SamplerError(f"Beta parameters must be positive, got a={a} b={b}")
    return rng.beta(a, b, size=size)


def sample_dirichlet_half(rng: np.random.Generator) -> Tuple[float, float, float]:
    """Dir(1/2, 1/2, 1/2) as three normalized Gamma(1/2, 1) draws."""
    g = rng.gamma(0.5, 1.0, size=3)
    total = g.sum()
    a1, a2 = g[0] / total, g[1] / total
    return float(a1), float(a2), float(1.0 - a1 - a2)


def sample_besq_m1_lifetime(
    a: float, rng: np.random.Generator, size: Optional[int] = None
) -> ArrayOrFloat:
    """Absorption level of BESQ_a(-1): a / (2G) with G ~ Gamma(3/2, 1)."""
    if a < 0:
        raise SamplerError(f"Initial value must be nonnegative, got {a}")
    g = rng.gamma(1.5, 1.0, size=size)
    if a == 0:
        return 0.0 if size is None else np.zeros(size)
    return a / (2.0 * g)


def overshoot_ratio_from_uniform(u: ArrayOrFloat) -> ArrayOrFloat:
    """Inverse CDF of the overshoot ratio, whose CDF is (2/pi) arctan(r)."""
    return np.tan(0.5 * np.pi * np.asarray(u, dtype=float))


def sample_overshoot_ratio(rng: np.random.Generator, size: Optional[int] = None) -> ArrayOrFloat:
    u = rng.random(size)
    # random() is in [0, 1); U = 0 would give a zero ratio
    u = np.where(u == 0.0, np.nextafter(0.0, 1.0), u)
    ratio = overshoot_ratio_from_uniform(u)
    return float(ratio) if size is None else ratio


def grow_ordered_tables(
    alpha: float,
    theta: float,
    n: int,
    rng: np.random.Generator,
    start: Tuple[int, ...] = (1,),
    first_slot: int = 1,
) -> Tuple[int, ...]:
    """Table populations of an ordered restaurant after ``n`` customers.

    New tables open at rate ``alpha`` in each slot from ``first_slot`` on and at rate ``theta``
    on the far left. Seating starts from ``start`` (no tables when ``n`` is 0).
    """
    tables = list(start) if n >= sum(start) else []
    for customers in range(sum(tables), n):
        k = len(tables)
        join = np.asarray(tables, dtype=float) - alpha
        slots = np.full(max(k + 1 - first_slot, 0), alpha)
        weights = np.concatenate((join, slots, [theta if theta > 0 else 0.0]))
        u = rng.random() * (customers + theta)
        pick = int(np.searchsorted(np.cumsum(weights), u, side="right"))
        pick = min(pick, len(weights) - 1)
        if pick < k:
            tables[pick] += 1
        elif pick < len(weights) - 1:
            tables.insert(pick - k + first_slot, 1)
        else:
            tables.insert(0, 1)
    return tuple(tables)


def sample_pdip(
    theta2: float,
    n_approx: int,
    rng: np.random.Generator,
    h: Optional[float] = None,
) -> IntervalPartition:
    """Unit-mass PDIP(1/2, theta2) approximated by an oCRP(1/2, theta2) with ``n_approx`` customers.

    Table populations are divided by ``n_approx``; diversities come from the estimator with
    threshold ``h`` (default ``10 / n_approx``).
    """
    if n_approx < 1:
        raise SamplerError(f"n_approx must be at least 1, got {n_approx}")
    if theta2 not in (0, 0.5):
        raise SamplerError(f"theta2 must be 0 or 1/2, got {theta2}")
    tables = grow_ordered_tables(0.5, float(theta2), n_approx, rng)
    masses = [m / n_approx for m in tables]
    # keep the total exactly 1
    masses[-1] = 1.0 - math.fsum(masses[:-1])
    beta = IntervalPartition(tuple(masses))
    return annotate_diversity(beta, h if h is not None else 10.0 / n_approx)


def sample_pd_largest_stickbreak(
    alpha: float, theta: float, rng: np.random.Generator, n_sticks: int = 2000
) -> float:
    """Largest block of PD(alpha, theta) from a truncated GEM stick-breaking sequence."""
    k = np.arange(1, n_sticks + 1)
    w = rng.beta(1.0 - alpha, theta + k * alpha)
    remaining = np.concatenate(([1.0], np.cumprod(1.0 - w)[:-1]))
    sticks = w * remaining
    return float(max(sticks.max(), 1.0 - sticks.sum()))
