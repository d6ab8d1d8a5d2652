"""Run any of the three type-2 constructions from a fixed or pseudo-stationary start."""

import math
from typing import Optional

import numpy as np

from skewer_lab.kernels.besq import DEFAULT_DT
from skewer_lab.kernels.samplers import sample_gamma
from skewer_lab.partitions import EMPTY, IntervalPartition
from skewer_lab.type2.alternating import DEFAULT_SCALE_UNIT, type2_alternating
from skewer_lab.type2.clocking import type2_deletion_clocking
from skewer_lab.type2.initial import DEFAULT_N_APPROX, sample_pseudo_stationary_state
from skewer_lab.type2.interweaving import type2_interweaving
from skewer_lab.type2.states import DEFAULT_DY, Type2Error, Type2Path

CONSTRUCTIONS = ("alternating", "clocking", "interweaving")


def type2_path(
    construction: str,
    a: float,
    b: float,
    beta: Optional[IntervalPartition],
    rng: np.random.Generator,
    gamma: float = 1.0,
    scale_unit: float = DEFAULT_SCALE_UNIT,
    dt: float = DEFAULT_DT,
    dy: float = DEFAULT_DY,
    max_level: float = math.inf,
    n_approx: int = DEFAULT_N_APPROX,
    stop_at_degeneration: bool = False,
) -> Type2Path:
    """Dispatch on ``construction``; interweaving ignores ``beta`` only when it is ``None``."""
    if construction == "alternating":
        return type2_alternating(
            a,
            b,
            beta if beta is not None else EMPTY,
            dt,
            rng,
            scale_unit=scale_unit,
            dy=dy,
            max_level=max_level,
            stop_at_degeneration=stop_at_degeneration,
        )
    if construction == "clocking":
        return type2_deletion_clocking(
            a,
            b,
            beta if beta is not None else EMPTY,
            scale_unit,
            rng,
            dy=dy,
            max_level=max_level,
            stop_at_degeneration=stop_at_degeneration,
        )
    if construction == "interweaving":
        return type2_interweaving(
            a,
            b,
            gamma,
            scale_unit,
            rng,
            dy=dy,
            max_level=max_level,
            beta=beta,
            n_approx=n_approx,
            stop_at_degeneration=stop_at_degeneration,
        )
    raise Type2Error(f"Unknown construction {construction!r}; expected one of {CONSTRUCTIONS}")


def pseudo_stationary_path(
    construction: str,
    gamma: float,
    rng: np.random.Generator,
    scale_unit: float = DEFAULT_SCALE_UNIT,
    dt: float = DEFAULT_DT,
    dy: float = DEFAULT_DY,
    max_level: float = math.inf,
    n_approx: int = DEFAULT_N_APPROX,
    stop_at_degeneration: bool = False,
) -> Type2Path:
    """Type-2 path with Gamma(1/2, gamma) tops and a Gamma(1/2, gamma)-scaled PDIP(1/2, 1/2)."""
    if construction == "interweaving":
        a, b = (float(x) for x in sample_gamma(0.5, gamma, rng, size=2))
        beta = None
    else:
        state = sample_pseudo_stationary_state(gamma, rng, n_approx)
        a, b, beta = state.m1, state.m2, state.alpha
    return type2_path(
        construction,
        a,
        b,
        beta,
        rng,
        gamma=gamma,
        scale_unit=scale_unit,
        dt=dt,
        dy=dy,
        max_level=max_level,
        n_approx=n_approx,
        stop_at_degeneration=stop_at_degeneration,
    )
