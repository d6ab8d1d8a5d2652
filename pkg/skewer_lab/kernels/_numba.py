"""Compiled inner loops.

Each kernel reseeds the numba generator from an integer drawn out of the caller's numpy stream,
so results depend only on that stream.
"""

import math

import numpy as np
from numba import njit

REFINE_LIMIT = 1024.0


@njit(cache=True)
def _seed(seed):
    np.random.seed(seed)


@njit(cache=True)
def _grow(buf, size):
    out = np.empty(2 * size, dtype=buf.dtype)
    out[:size] = buf[:size]
    return out


@njit(cache=True)
def birth_death_kernel(m0, seed):
    """Birth–death chain with death rate m and birth rate m - 1/2, run until it hits 0.

    Returns event times (first entry 0) and the population after each event.
    """
    _seed(seed)
    cap = 64
    times = np.empty(cap, dtype=np.float64)
    pops = np.empty(cap, dtype=np.int64)
    times[0] = 0.0
    pops[0] = m0
    size = 1
    t = 0.0
    m = m0
    while m > 0:
        rate = 2.0 * m - 0.5
        t += np.random.exponential(1.0 / rate)
        if np.random.random() * rate < m:
            m -= 1
        else:
            m += 1
        if size == cap:
            times = _grow(times, size)
            pops = _grow(pops, size)
            cap *= 2
        times[size] = t
        pops[size] = m
        size += 1
    return times[:size], pops[:size]


@njit(cache=True)
def _euler_advance(x, t0, t1, dt):
    """Euler steps of dX = -dy + 2 sqrt(X) dB from t0 to t1; steps halve while X < 10 h.

    Returns (value at t1, absorption level or -1).
    """
    t = t0
    while t < t1 - 1e-12 * dt:
        h = min(dt, t1 - t)
        while x < 10.0 * h and h > dt / REFINE_LIMIT:
            h *= 0.5
        xn = x - h + 2.0 * math.sqrt(x * h) * np.random.standard_normal()
        if xn <= 0.0:
            return 0.0, t + h * x / (x - xn)
        x = xn
        t += h
    return x, -1.0


@njit(cache=True)
def euler_m1_path_kernel(x0, dt, n_steps, seed):
    """Grid values of a BESQ(-1) path; ``n_steps < 0`` runs to absorption."""
    _seed(seed)
    cap = 256 if n_steps < 0 else n_steps + 1
    values = np.zeros(cap, dtype=np.float64)
    values[0] = x0
    if x0 <= 0.0:
        return values[:1], 0.0
    x = x0
    k = 0
    while n_steps < 0 or k < n_steps:
        x, hit = _euler_advance(x, k * dt, (k + 1) * dt, dt)
        k += 1
        if k >= cap:
            values = _grow(values, cap)
            values[cap:] = 0.0
            cap *= 2
        values[k] = x
        if hit >= 0.0:
            return values[: k + 1], hit
    return values[: k + 1], np.inf


@njit(cache=True)
def euler_m1_batch_kernel(x0s, dt, horizon, seed):
    """Values at ``horizon`` and absorption levels (inf if alive) for many independent paths."""
    _seed(seed)
    n = x0s.shape[0]
    finals = np.zeros(n, dtype=np.float64)
    lifetimes = np.full(n, np.inf)
    for i in range(n):
        x = x0s[i]
        if x <= 0.0:
            lifetimes[i] = 0.0
            continue
        if np.isinf(horizon):
            t = 0.0
            while True:
                x, hit = _euler_advance(x, t, t + dt, dt)
                t += dt
                if hit >= 0.0:
                    lifetimes[i] = hit
                    break
        else:
            x, hit = _euler_advance(x, 0.0, horizon, dt)
            if hit >= 0.0:
                lifetimes[i] = hit
            else:
                finals[i] = x
    return finals, lifetimes
