"""Squared Bessel processes.

BESQ(d) solves dX = d dy + 2 sqrt(X) dB. Nonnegative dimensions are sampled exactly through the
Poisson mixture of Gamma laws; dimension -1 uses Euler–Maruyama with absorption at 0.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate, special, stats

from skewer_lab.kernels import _numba
from skewer_lab.kernels.samplers import SamplerError, draw_seed

logger = logging.getLogger(__name__)

SUPPORTED_DIMS = (-1.0, 0.0, 1.0, 4.0)
DEFAULT_DT = 1e-3


@dataclass(frozen=True)
class BesqPath:
    """BESQ path sampled on the grid ``k * dt``; ``lifetime`` is ``inf`` while alive."""

    x0: float
    dim: float
    dt: float
    values: np.ndarray
    lifetime: float

    @property
    def levels(self) -> np.ndarray:
        return self.dt * np.arange(len(self.values))

    @property
    def horizon(self) -> float:
        return self.dt * (len(self.values) - 1)

    def value_at(self, y):
        """Linear interpolation on the grid; 0 at and after absorption."""
        y = np.asarray(y, dtype=float)
        out = np.interp(y, self.levels, self.values, right=np.nan)
        beyond = y > self.horizon
        if np.any(beyond):
            if math.isinf(self.lifetime):
                raise SamplerError(f"Path recorded up to {self.horizon}, queried beyond")
            out = np.where(beyond, 0.0, out)
        if math.isfinite(self.lifetime):
            out = np.where(y >= self.lifetime, 0.0, out)
        return out if out.ndim else float(out)


def _check_dim(dim: float) -> float:
    dim = float(dim)
    if dim not in SUPPORTED_DIMS:
        raise SamplerError(f"Unsupported BESQ dimension {dim}; expected one of {SUPPORTED_DIMS}")
    return dim


def besq_exact_step(x, dim: float, t: float, rng: np.random.Generator):
    """Exact BESQ(dim) transition over time ``t`` for ``dim >= 0`` (vectorized in ``x``)."""
    x = np.asarray(x, dtype=float)
    n = rng.poisson(x / (2.0 * t))
    shape = n + 0.5 * dim
    positive = shape > 0
    out = np.zeros_like(x)
    if np.ndim(out) == 0:
        return float(2.0 * t * rng.gamma(shape)) if positive else 0.0
    out[positive] = 2.0 * t * rng.gamma(shape[positive])
    return out


def sample_besq_path(
    x0: float,
    dim: float,
    dt: float,
    horizon: float,
    rng: np.random.Generator,
) -> BesqPath:
    """Sample a BESQ(dim) path on ``[0, horizon]``.

    ``horizon=inf`` is allowed for dim -1 and 0, which are absorbed in finite time.
    """
    dim = _check_dim(dim)
    if x0 < 0 or dt <= 0:
        raise SamplerError(f"Need x0 >= 0 and dt > 0, got x0={x0} dt={dt}")
    if dim < 0:
        n_steps = -1 if math.isinf(horizon) else int(round(horizon / dt))
        values, lifetime = _numba.euler_m1_path_kernel(
            float(x0), float(dt), n_steps, draw_seed(rng)
        )
        return BesqPath(float(x0), dim, dt, np.asarray(values), float(lifetime))

    if math.isinf(horizon) and dim > 0:
        raise SamplerError(f"BESQ({dim}) is never absorbed; a finite horizon is required")
    if dim == 0 and x0 == 0:
        return BesqPath(0.0, dim, dt, np.zeros(1), 0.0)
    values = [float(x0)]
    lifetime = math.inf
    x = float(x0)
    k = 0
    n_steps = None if math.isinf(horizon) else int(round(horizon / dt))
    while n_steps is None or k < n_steps:
        previous = x
        x = besq_exact_step(x, dim, dt, rng)
        values.append(x)
        if dim == 0 and x == 0.0:
            # BESQ(0) from v is absorbed by s with probability exp(-v / 2s); invert that law
            # conditioned on absorption within this step.
            u = 1.0 - rng.random()
            lifetime = k * dt + previous / (previous / dt - 2.0 * math.log(u))
            break
        k += 1
    return BesqPath(float(x0), dim, dt, np.asarray(values), lifetime)


def sample_besq_marginal(
    x0,
    dim: float,
    y: float,
    rng: np.random.Generator,
    size: Optional[int] = None,
    dt: float = DEFAULT_DT,
) -> np.ndarray:
    """Values of independent BESQ(dim) paths at level ``y`` (0 when absorbed)."""
    dim = _check_dim(dim)
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    if size:
        x0 = np.broadcast_to(x0, (size,))
    x0 = np.array(x0, dtype=float)
    if y == 0:
        return x0
    if dim >= 0:
        return besq_exact_step(x0, dim, y, rng)
    finals, _ = _numba.euler_m1_batch_kernel(
        np.ascontiguousarray(x0, dtype=float), float(dt), float(y), draw_seed(rng)
    )
    return finals


def sample_besq_m1_hitting_times(
    x0, rng: np.random.Generator, size: Optional[int] = None, dt: float = DEFAULT_DT
) -> np.ndarray:
    """Euler absorption levels of independent BESQ(-1) paths."""
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    if size:
        x0 = np.broadcast_to(x0, (size,))
    _, lifetimes = _numba.euler_m1_batch_kernel(
        np.ascontiguousarray(x0, dtype=float), float(dt), np.inf, draw_seed(rng)
    )
    return lifetimes


def besq_additivity_compose(
    a: float,
    b: float,
    dt: float,
    rng: np.random.Generator,
    horizon: float = math.inf,
) -> BesqPath:
    """BESQ_{a+b}(-1) glued from X ~ BESQ_a(-1) and W ~ BESQ_b(0).

    V = X + W up to the first time tau either is absorbed, then V continues as
    V(tau) * Z((y - tau) / V(tau)) with Z ~ BESQ_1(-1) independent.
    """
    if a < 0 or b < 0:
        raise SamplerError(f"Initial values must be nonnegative, got a={a} b={b}")
    if a == 0 and b == 0:
        return BesqPath(0.0, -1.0, dt, np.zeros(1), 0.0)

    x = sample_besq_path(a, -1.0, dt, math.inf, rng)
    w = sample_besq_path(b, 0.0, dt, math.inf, rng)
    tau = min(x.lifetime, w.lifetime)
    tau_index = int(math.floor(tau / dt))
    head = x.value_at(dt * np.arange(tau_index + 1)) + w.value_at(dt * np.arange(tau_index + 1))
    v_tau = float(x.value_at(tau) + w.value_at(tau))
    if v_tau <= 0:
        return BesqPath(float(a + b), -1.0, dt, head, tau)

    # Z runs at time scale 1 / v_tau.
    z = sample_besq_path(1.0, -1.0, min(dt / v_tau, dt), math.inf, rng)
    lifetime = tau + v_tau * z.lifetime
    end = lifetime if math.isinf(horizon) else min(horizon, lifetime)
    grid = dt * np.arange(tau_index + 1, int(math.floor(end / dt)) + 2)
    tail = v_tau * np.atleast_1d(z.value_at((grid - tau) / v_tau))
    values = np.concatenate((head, tail))
    if not math.isinf(horizon):
        values = values[: int(round(horizon / dt)) + 1]
    return BesqPath(float(a + b), -1.0, dt, values, float(lifetime))


def besq_m1_lifetime_cdf(t, a: float):
    """P(a / (2G) <= t) with G ~ Gamma(3/2, 1)."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore"):
        out = np.where(t > 0, special.gammaincc(1.5, a / (2.0 * np.maximum(t, 1e-300))), 0.0)
    return out if out.ndim else float(out)


def besq_m1_killed_cdf(x: float, y: float, z: float) -> float:
    """P(X_y <= z, y < lifetime) for X ~ BESQ_x(-1).

    Uses the h-transform identity: the killed BESQ(-1) density equals (x/v)^{3/2} times the
    BESQ(5) density, and BESQ(5) at time y is y times a noncentral chi-square(5, x/y).
    """
    if z <= 0:
        return 0.0

    def density(v: float) -> float:
        return (x / v) ** 1.5 * stats.ncx2.pdf(v / y, 5, x / y) / y

    value, _ = integrate.quad(density, 0.0, z, limit=200)
    return float(value)


def besq_m1_survival(x: float, y: float) -> float:
    """P(y < lifetime) for BESQ_x(-1)."""
    return float(special.gammainc(1.5, x / (2.0 * y))) if y > 0 else 1.0
