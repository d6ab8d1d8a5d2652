"""Battery entries for type-2 evolutions started in pseudo-stationarity."""

import itertools
import logging
import math
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from skewer_lab.depoisson import intertwining_restart
from skewer_lab.kernels import (
    DEFAULT_DT,
    beta_cdf,
    gamma_cdf,
    ks_statistic,
    ks_threshold_one,
    ks_threshold_two,
    ks_two_sample,
    path_stream,
    sample_besq_marginal,
    sample_gamma,
)
from skewer_lab.type2 import (
    CONSTRUCTIONS,
    DEFAULT_DY,
    DEFAULT_N_APPROX,
    DEFAULT_SCALE_UNIT,
    Type2Error,
    degeneration,
    degeneration_survival,
    pseudo_stationary_path,
    sample_clocking_inputs,
    sample_pseudo_stationary_state,
    surviving_rate,
    type2_deletion_clocking,
)
from skewer_lab.verify.pool import map_paths
from skewer_lab.verify.registry import (
    Outcome,
    float_list,
    ks_outcome,
    loosened,
    normalized_ks,
    param,
    register,
)

logger = logging.getLogger(__name__)

DEGENERATION_LEVELS = (0.25, 0.5, 1.0)
STATE_TOLERANCE = 1e-12


def _settings(params: Dict[str, Any], construction: str = "clocking", y: float = 0.5):
    return {
        "construction": str(params.get("construction", construction)),
        "gamma": param(params, "gamma", 1.0),
        "y": param(params, "y", y),
        "scale_unit": param(params, "scale_unit", DEFAULT_SCALE_UNIT),
        "dt": param(params, "dt", DEFAULT_DT),
        "dy": param(params, "dy", DEFAULT_DY),
        "n_approx": param(params, "n_approx", DEFAULT_N_APPROX, int),
    }


def _path(rng: np.random.Generator, s: Dict[str, Any], max_level: float, **kwargs):
    return pseudo_stationary_path(
        s["construction"],
        s["gamma"],
        rng,
        scale_unit=s["scale_unit"],
        dt=s["dt"],
        dy=s["dy"],
        max_level=max_level,
        n_approx=s["n_approx"],
        **kwargs,
    )


def _degeneration_sample(rng: np.random.Generator, s: Dict[str, Any]) -> Tuple[float, int, float]:
    # nothing past level 0 needs recording; the degeneration data come from the construction
    path = _path(rng, s, 0.0)
    level, index, mass = degeneration(path)
    return float(level), int(index), float(mass)


def _degenerations(n_paths: int, seed: int, s: Dict[str, Any]) -> np.ndarray:
    return np.array(map_paths(_degeneration_sample, n_paths, seed, s), dtype=float)


@register("degeneration_prob", "P(D > y) = (2 y gamma + 1)^-2", default_paths=2000)
def degeneration_prob(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    s = _settings(params)
    levels = float_list(params["y"]) if "y" in params else list(DEGENERATION_LEVELS)
    samples = _degenerations(n_paths, seed, s)
    details = {}
    checks: List[Tuple[float, float, float]] = []
    for y in levels:
        empirical = float(np.mean(samples[:, 0] > y))
        exact = degeneration_survival(y, s["gamma"])
        tolerance = max(0.02, 3.0 * math.sqrt(exact * (1.0 - exact) / n_paths))
        details[f"p_{y:g}"] = empirical
        checks.append((empirical, exact, tolerance))
    # report the level furthest from its reference, relative to its tolerance
    empirical, exact, tolerance = max(checks, key=lambda c: abs(c[0] - c[1]) / c[2])
    return Outcome(empirical, exact, tolerance, "(2 y gamma + 1)^-2", n_paths, details)


@register("surviving_label", "each top survives degeneration with probability 1/2", 2000)
def surviving_label(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    samples = _degenerations(n_paths, seed, _settings(params))
    labels = samples[samples[:, 1] > 0, 1]
    frequency = float(np.mean(labels == 1)) if len(labels) else math.nan
    tolerance = max(0.015, 1.5 / math.sqrt(max(len(labels), 1)))
    return Outcome(frequency, 0.5, tolerance, "P(A) = 1/2", len(labels))


DEGENERATION_WINDOW = (0.4, 0.6)


def degeneration_mass_distance(
    samples: np.ndarray, window: Tuple[float, float], gamma: float
) -> Tuple[float, int]:
    """KS distance of surviving masses degenerating inside ``window`` from their Gamma law.

    ``samples`` rows are ``(D, surviving label, M_D)``. Each mass is transformed by the
    Gamma(1/2, gamma / (2 D gamma + 1)) CDF at its own level, so the result is compared with the
    uniform law.
    """
    lo, hi = window
    keep = (samples[:, 1] > 0) & (samples[:, 0] >= lo) & (samples[:, 0] <= hi)
    levels, masses = samples[keep, 0], samples[keep, 2]
    uniforms = gamma_cdf(masses * surviving_rate(levels, gamma), 0.5, 1.0)
    return ks_statistic(uniforms, lambda u: np.clip(u, 0.0, 1.0)), len(uniforms)


@register("degeneration_mass", "surviving mass given D near y is Gamma(1/2, .)", 4000)
def degeneration_mass(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    s = _settings(params)
    lo, hi = float_list(params.get("window", DEGENERATION_WINDOW))
    samples = _degenerations(n_paths, seed, s)
    distance, n = degeneration_mass_distance(samples, (lo, hi), s["gamma"])
    threshold = loosened(ks_threshold_one(n))
    return ks_outcome(
        distance, threshold, "Gamma(1/2, gamma / (2 D gamma + 1))", n, window_lo=lo, window_hi=hi
    )


def _surviving_state(rng: np.random.Generator, s: Dict[str, Any]):
    path = _path(rng, s, s["y"])
    if path.degeneration_level is None or path.degeneration_level <= s["y"]:
        return None
    state = path.state_at(s["y"])
    return state.m1, state.total_mass


@register("pseudo_stationarity", "given D > y: m1 / M is Beta(1/2, 1), m1 is Gamma", 2000)
def pseudo_stationarity(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    s = _settings(params)
    results = [r for r in map_paths(_surviving_state, n_paths, seed, s) if r is not None]
    m1 = np.array([r[0] for r in results])
    ratio = m1 / np.array([r[1] for r in results])
    rate = surviving_rate(s["y"], s["gamma"])
    threshold = loosened(ks_threshold_one(len(results)))
    ks_ratio = ks_statistic(ratio, lambda x: beta_cdf(x, 0.5, 1.0))
    ks_mass = ks_statistic(m1, lambda x: gamma_cdf(x, 0.5, rate))
    return Outcome(
        normalized_ks([(ks_ratio, threshold), (ks_mass, threshold)]),
        0.0,
        1.0,
        "Dir(1/2, 1/2, 1/2) proportions, Gamma(1/2, .) tops",
        len(results),
        {"ks_ratio": ks_ratio, "ks_mass": ks_mass},
    )


def _final_mass(rng: np.random.Generator, s: Dict[str, Any]) -> float:
    return _path(rng, s, s["y"]).state_at(s["y"]).total_mass


def _initial_mass(rng: np.random.Generator, s: Dict[str, Any]) -> float:
    return _path(rng, s, 0.0).states[0].total_mass


def _register_total_mass(construction: str) -> None:
    @register(
        f"total_mass_{construction}",
        f"total mass of the {construction} construction is BESQ(-1)",
        default_paths=2000,
    )
    def check(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
        s = _settings(params, construction, y=0.25)
        masses = map_paths(_final_mass, n_paths, seed, s)
        rng = path_stream(seed, n_paths)
        # reference masses start from the pseudo-stationary law
        x0 = sample_gamma(1.5, s["gamma"], rng, size=n_paths)
        direct = sample_besq_marginal(x0, -1.0, s["y"], rng, dt=s["dt"])
        distance = ks_two_sample(masses, direct)
        threshold = loosened(ks_threshold_two(n_paths, n_paths))
        return ks_outcome(distance, threshold, "BESQ(-1) from Gamma(3/2, gamma)", n_paths)


for _construction in CONSTRUCTIONS:
    _register_total_mass(_construction)


@register("initial_mass", "lattice starts keep the mean mass 3 / (2 gamma)", 2000)
def initial_mass(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    gamma = param(params, "gamma", 1.0)
    exact = 1.5 / gamma
    # three standard errors of a Gamma(3/2, gamma) mean
    tolerance = 3.0 * math.sqrt(1.5) / gamma / math.sqrt(n_paths)
    details = {}
    for construction in CONSTRUCTIONS:
        s = _settings(params, construction)
        masses = map_paths(_initial_mass, n_paths, seed, s)
        details[f"mean_{construction}"] = float(np.mean(masses))
    # report the construction furthest from the exact mean
    statistic = max(details.values(), key=lambda m: abs(m - exact))
    return Outcome(
        statistic, exact, tolerance, "E Gamma(3/2, gamma) = 3 / (2 gamma)", n_paths, details
    )


def _three_mass_sample(rng: np.random.Generator, s: Dict[str, Any]) -> Tuple[float, ...]:
    return tuple(_path(rng, s, s["y"]).state_at(s["y"]).three_mass())


@register("construction_equivalence", "the three constructions agree at level y", 2000)
def construction_equivalence(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    samples = {}
    for k, construction in enumerate(CONSTRUCTIONS):
        s = _settings(params, construction)
        s["construction"] = construction
        # a distinct seed per construction keeps the samples independent
        samples[construction] = np.array(
            map_paths(_three_mass_sample, n_paths, seed + 7919 * (k + 1), s)
        )
    threshold = loosened(ks_threshold_two(n_paths, n_paths))
    details = {}
    for first, second in itertools.combinations(CONSTRUCTIONS, 2):
        for coordinate, name in enumerate(("m1", "m2", "alpha")):
            details[f"{first}_{second}_{name}"] = ks_two_sample(
                samples[first][:, coordinate], samples[second][:, coordinate]
            )
    statistic = normalized_ks([(d, threshold) for d in details.values()])
    return Outcome(statistic, 0.0, 1.0, "same type-2 law", n_paths, details)


def _symmetry_mismatch(rng: np.random.Generator, s: Dict[str, Any]) -> int:
    state = sample_pseudo_stationary_state(s["gamma"], rng, s["n_approx"])
    inputs = sample_clocking_inputs(state.m1, state.m2, state.alpha, s["scale_unit"], rng)
    kwargs = dict(dy=s["dy"], max_level=s["y"], coupled_inputs=inputs)
    plain = type2_deletion_clocking(
        state.m1, state.m2, state.alpha, s["scale_unit"], rng, **kwargs
    )
    swapped = type2_deletion_clocking(
        state.m1, state.m2, state.alpha, s["scale_unit"], rng, swap_roles=True, **kwargs
    )
    return int(not paths_agree(plain, swapped))


def paths_agree(first, second) -> bool:
    """Same lifetime, degeneration level and states on the shared recording levels."""
    if not math.isclose(first.lifetime, second.lifetime, abs_tol=STATE_TOLERANCE):
        return False
    if (first.degeneration_level is None) != (second.degeneration_level is None):
        return False
    if first.degeneration_level is not None and not math.isclose(
        first.degeneration_level, second.degeneration_level, abs_tol=STATE_TOLERANCE
    ):
        return False
    _, i, j = np.intersect1d(first.levels, second.levels, return_indices=True)
    a, b = first.three_mass()[i], second.three_mass()[j]
    return bool(np.allclose(a, b, atol=STATE_TOLERANCE))


@register("clocking_symmetry", "swapping the two external spindles gives the same path", 500)
def clocking_symmetry(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    s = _settings(params, y=1.0)
    mismatches = sum(map_paths(_symmetry_mismatch, n_paths, seed, s))
    return Outcome(float(mismatches), 0.0, 0.0, "pathwise identity", n_paths)


def _clock_changes(rng: np.random.Generator, s: Dict[str, Any]) -> Optional[int]:
    try:
        return _path(rng, s, 0.0).clock_changes()
    except Type2Error:
        return None


@register("clock_nonaccumulation", "clock changes stay finite", default_paths=2000)
def clock_nonaccumulation(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    changes = map_paths(_clock_changes, n_paths, seed, _settings(params))
    finite = [c for c in changes if c is not None]
    capped = len(changes) - len(finite)
    return Outcome(
        capped / n_paths,
        0.0,
        0.0,
        "finitely many clock levels",
        n_paths,
        {"mean_changes": float(np.mean(finite)) if finite else math.nan},
    )


def _restart_pair(rng: np.random.Generator, s: Dict[str, Any]) -> List[float]:
    start, step = s["start"], s["step"]
    path = _path(rng, s, start + step)
    continued = path.state_at(start + step).three_mass()
    restarted = intertwining_restart(
        path.state_at(start), step, s["scale_unit"], rng, s["n_approx"], s["dy"]
    )
    return list(continued) + list(restarted)


@register("intertwining_restart", "restarting the partition as a PDIP keeps the 3-mass law", 2000)
def intertwining_restart_check(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    s = _settings(params)
    s["construction"] = "clocking"
    s["start"] = param(params, "start", 0.25)
    s["step"] = param(params, "step", 0.25)
    samples = np.array(map_paths(_restart_pair, n_paths, seed, s))
    threshold = loosened(ks_threshold_two(n_paths, n_paths))
    details = {
        f"ks_{name}": ks_two_sample(samples[:, i], samples[:, i + 3])
        for i, name in enumerate(("m1", "m2", "alpha"))
    }
    statistic = normalized_ks([(d, threshold) for d in details.values()])
    return Outcome(statistic, 0.0, 1.0, "Markov 3-mass projection", n_paths, details)
