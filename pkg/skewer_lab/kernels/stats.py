"""Goodness-of-fit statistics and reference CDFs.

Incomplete gamma/beta functions come from ``scipy.special`` (relative error well below 1e-8 in
the ranges used here).
"""

import math
from typing import Callable, Sequence

import numpy as np
from scipy import special, stats

from skewer_lab.kernels.samplers import SamplerError

KS_ONE_PERCENT = 1.63
KS_FIVE_PERCENT = 1.358
DISCRETIZATION_ALLOWANCE = 1.5


def _nonempty(samples: Sequence[float], name: str = "samples") -> np.ndarray:
    arr = np.asarray(samples, dtype=float).ravel()
    if arr.size == 0:
        raise SamplerError(f"KS statistic needs nonempty {name}")
    return arr


def ks_statistic(samples: Sequence[float], cdf: Callable) -> float:
    """One-sample Kolmogorov–Smirnov distance to ``cdf``."""
    return float(stats.kstest(_nonempty(samples), cdf).statistic)


def ks_two_sample(s1: Sequence[float], s2: Sequence[float]) -> float:
    return float(stats.ks_2samp(_nonempty(s1, "s1"), _nonempty(s2, "s2")).statistic)


def ks_threshold_one(n: int, allowance: float = 1.0) -> float:
    """Asymptotic 1% critical value for a one-sample test of size ``n``."""
    return allowance * KS_ONE_PERCENT / math.sqrt(n)


def ks_threshold_two(n: int, m: int, allowance: float = 1.0) -> float:
    return allowance * KS_ONE_PERCENT * math.sqrt((n + m) / (n * m))


def gamma_cdf(x, shape: float, rate: float):
    """CDF of Gamma(shape, rate) (rate parametrization)."""
    x = np.maximum(np.asarray(x, dtype=float), 0.0)
    out = special.gammainc(shape, rate * x)
    return out if np.ndim(out) else float(out)


def beta_cdf(x, a: float, b: float):
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    out = special.betainc(a, b, x)
    return out if np.ndim(out) else float(out)


def exponential_cdf(x, rate: float):
    return gamma_cdf(x, 1.0, rate)


def overshoot_cdf(r):
    """CDF (2/pi) arctan(r) of the overshoot ratio."""
    r = np.maximum(np.asarray(r, dtype=float), 0.0)
    out = 2.0 / math.pi * np.arctan(r)
    return out if np.ndim(out) else float(out)


def kolmogorov_quantile(n: int, level: float, reps: int, rng: np.random.Generator) -> float:
    """Upper ``level`` quantile of sqrt(n) * D_n for uniform samples, by simulation."""
    grid_hi = np.arange(1, n + 1) / n
    grid_lo = np.arange(0, n) / n
    u = np.sort(rng.random((reps, n)), axis=1)
    d = np.maximum((grid_hi - u).max(axis=1), (u - grid_lo).max(axis=1))
    return float(np.quantile(math.sqrt(n) * d, 1.0 - level))
