"""Initial states: pseudo-stationary laws and lattice quantization at scale 1/n."""

import logging
from typing import Optional

import numpy as np

from skewer_lab.kernels.samplers import SamplerError, sample_gamma, sample_pdip
from skewer_lab.partitions import IntervalPartition, scale
from skewer_lab.scaffolding.measures import initial_population
from skewer_lab.type2.states import Type2Error, Type2State

logger = logging.getLogger(__name__)

DEFAULT_N_APPROX = 1024


def quantize_mass(x: float, scale_unit: float, rng: Optional[np.random.Generator] = None) -> float:
    """Lattice mass with the population rule of :func:`initial_population`; may be 0."""
    if x < 0:
        raise Type2Error(f"Masses must be nonnegative, got {x}")
    return initial_population(x, scale_unit, rng) * scale_unit


def quantize_partition(
    beta: IntervalPartition, scale_unit: float, rng: Optional[np.random.Generator] = None
) -> IntervalPartition:
    """Quantize every block; blocks left without a customer are dropped."""
    masses = (quantize_mass(x, scale_unit, rng) for x in beta.masses)
    return IntervalPartition(tuple(m for m in masses if m > 0))


def quantize_state(
    state: Type2State, scale_unit: float, rng: Optional[np.random.Generator] = None
) -> Type2State:
    return Type2State(
        quantize_mass(state.m1, scale_unit, rng),
        quantize_mass(state.m2, scale_unit, rng),
        quantize_partition(state.alpha, scale_unit, rng),
    )


def sample_scaled_pdip(
    mass: float, theta2: float, rng: np.random.Generator, n_approx: int = DEFAULT_N_APPROX
) -> IntervalPartition:
    if mass <= 0:
        return IntervalPartition()
    return scale(mass, sample_pdip(theta2, n_approx, rng))


def sample_pseudo_stationary_state(
    gamma: float, rng: np.random.Generator, n_approx: int = DEFAULT_N_APPROX
) -> Type2State:
    """Tops i.i.d. Gamma(1/2, gamma), partition Gamma(1/2, gamma) * PDIP(1/2, 1/2)."""
    if gamma <= 0:
        raise SamplerError(f"gamma must be positive, got {gamma}")
    m1, m2, c = (float(v) for v in sample_gamma(0.5, gamma, rng, size=3))
    return Type2State(m1, m2, sample_scaled_pdip(c, 0.5, rng, n_approx))


def sample_type1_pseudo_stationary(
    gamma: float, rng: np.random.Generator, n_approx: int = DEFAULT_N_APPROX
) -> IntervalPartition:
    """Exponential(gamma) total mass spread as a PDIP(1/2, 0)."""
    mass = float(rng.exponential(1.0 / gamma))
    return sample_scaled_pdip(mass, 0.0, rng, n_approx)


def sample_type0_pseudo_stationary(
    gamma: float, rng: np.random.Generator, n_approx: int = DEFAULT_N_APPROX
) -> IntervalPartition:
    """Gamma(1/2, gamma) total mass spread as a PDIP(1/2, 1/2)."""
    mass = float(sample_gamma(0.5, gamma, rng))
    return sample_scaled_pdip(mass, 0.5, rng, n_approx)


def degeneration_survival(y, gamma: float):
    """P(D > y) = (2 y gamma + 1)^(-2) under the pseudo-stationary start."""
    y = np.asarray(y, dtype=float)
    out = (2.0 * y * gamma + 1.0) ** -2
    return out if out.ndim else float(out)


def surviving_rate(y: float, gamma: float) -> float:
    """Gamma rate of pseudo-stationary masses at level ``y``: gamma / (2 y gamma + 1)."""
    return gamma / (2.0 * y * gamma + 1.0)
