"""Battery entries for de-Poissonization, the resampling 2-tree and the Wright-Fisher reference."""

import logging
import math
from typing import Any, Dict, List, Optional

import numpy as np

from skewer_lab.depoisson import (
    DEFAULT_DU,
    DePoissonizationError,
    depoissonize,
    resampling_2tree,
    wf_reference,
)
from skewer_lab.kernels import (
    DEFAULT_DT,
    beta_cdf,
    ks_statistic,
    ks_threshold_one,
    ks_threshold_two,
    ks_two_sample,
)
from skewer_lab.partitions import diversity_estimate
from skewer_lab.type2 import (
    DEFAULT_DY,
    DEFAULT_N_APPROX,
    DEFAULT_SCALE_UNIT,
    Type2State,
    sample_scaled_pdip,
    type2_deletion_clocking,
)
from skewer_lab.verify.pool import map_paths
from skewer_lab.verify.registry import (
    Outcome,
    VerificationError,
    float_list,
    loosened,
    normalized_ks,
    param,
    register,
)

logger = logging.getLogger(__name__)

RESAMPLING_START = (0.9, 0.05, 0.05)
RESAMPLING_TIMES = (2.0, 4.0, 8.0)
WF_START = (0.4, 0.3, 0.3)
MEAN_TOLERANCE = 0.01
# blocks allowed to cross the diversity threshold in one grid step
CONTINUITY_TOLERANCE = 5.0
COORDINATES = ("x1", "x2", "x3")


def _settings(params: Dict[str, Any]) -> Dict[str, Any]:
    return {
        "scale_unit": param(params, "scale_unit", DEFAULT_SCALE_UNIT),
        "du": param(params, "du", DEFAULT_DU),
        "dy": param(params, "dy", DEFAULT_DY),
        "n_approx": param(params, "n_approx", DEFAULT_N_APPROX, int),
    }


def _start_state(x0, rng: np.random.Generator, n_approx: int) -> Type2State:
    x = float_list(x0)
    if len(x) != 3:
        raise VerificationError(f"Starting point needs three coordinates, got {x0!r}")
    return Type2State(x[0], x[1], sample_scaled_pdip(x[2], 0.5, rng, n_approx))


def _two_tree(rng: np.random.Generator, s: Dict[str, Any], horizon: float):
    return resampling_2tree(
        _start_state(s["x0"], rng, s["n_approx"]),
        horizon,
        s["du"],
        rng,
        scale_unit=s["scale_unit"],
        dy=s["dy"],
        n_approx=s["n_approx"],
    )


def _resampled_masses(rng: np.random.Generator, s: Dict[str, Any]) -> List[List[float]]:
    path = _two_tree(rng, s, max(s["times"]))
    return [list(path.state_at(u).three_mass()) for u in s["times"]]


def _resampling_samples(n_paths: int, seed: int, params: Dict[str, Any]):
    s = _settings(params)
    s["x0"] = params.get("x0", RESAMPLING_START)
    s["times"] = float_list(params.get("u", RESAMPLING_TIMES))
    # shape (paths, times, coordinates)
    return s["times"], np.array(map_paths(_resampled_masses, n_paths, seed, s))


@register("resampling_stationarity", "2-tree m1 marginal converges to Beta(1/2, 1)", 10_000)
def resampling_stationarity(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    times, samples = _resampling_samples(n_paths, seed, params)
    threshold = loosened(ks_threshold_one(n_paths))
    details = {
        f"ks_u{u:g}": ks_statistic(samples[:, k, 0], lambda x: beta_cdf(x, 0.5, 1.0))
        for k, u in enumerate(times)
    }
    statistic = normalized_ks([(d, threshold) for d in details.values()])
    return Outcome(statistic, 0.0, 1.0, "Dir(1/2, 1/2, 1/2) stationary law", n_paths, details)


@register("resampling_means", "2-tree coordinate means approach 1/3", default_paths=10_000)
def resampling_means(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    times, samples = _resampling_samples(n_paths, seed, params)
    # the last time is the one closest to stationarity
    means = samples[:, -1, :].mean(axis=0)
    details = {f"mean_{name}": float(m) for name, m in zip(COORDINATES, means)}
    worst = int(np.argmax(np.abs(means - 1.0 / 3.0)))
    return Outcome(
        float(means[worst]),
        1.0 / 3.0,
        MEAN_TOLERANCE,
        f"Dir(1/2, 1/2, 1/2) means at u={times[-1]:g}",
        n_paths,
        details,
    )


def _largest_continuous_jump(rng: np.random.Generator, s: Dict[str, Any]) -> float:
    path = _two_tree(rng, s, s["horizon"])
    h = s["h"]
    counts = np.array([diversity_estimate(state.alpha, h) for state in path.states])
    counts /= math.sqrt(math.pi * h)
    steps = np.abs(np.diff(counts))
    # flags mark the first point after a resampling time
    steps = steps[path.jump_flags[1:] == 0]
    return float(steps.max()) if steps.size else 0.0


@register("resampling_continuity", "2-tree diversity only jumps at resampling times", 200)
def resampling_continuity(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    s = _settings(params)
    s["x0"] = params.get("x0", RESAMPLING_START)
    s["horizon"] = param(params, "horizon", 2.0)
    s["h"] = param(params, "h", 10.0 * s["scale_unit"])
    jumps = map_paths(_largest_continuous_jump, n_paths, seed, s)
    return Outcome(
        float(max(jumps)) if jumps else 0.0,
        0.0,
        CONTINUITY_TOLERANCE,
        "continuous between resampling times",
        n_paths,
        {"mean_largest_step": float(np.mean(jumps)) if jumps else math.nan},
    )


def _projected_survivor(rng: np.random.Generator, s: Dict[str, Any]) -> Optional[List[float]]:
    state = _start_state(s["x0"], rng, s["n_approx"])
    path = type2_deletion_clocking(
        state.m1,
        state.m2,
        state.alpha,
        s["scale_unit"],
        rng,
        dy=s["dy"],
        max_level=s["max_level"],
        stop_at_degeneration=True,
    )
    u = s["u"]
    try:
        segment = depoissonize(path, s["du"], horizon_u=u)
    except DePoissonizationError:
        return None
    if segment.absorption_time is not None and segment.absorption_time <= u:
        return None
    if segment.u[-1] < u - 0.5 * s["du"]:
        logger.debug("Recorded levels end before u=%.3f", u)
        return None
    return list(segment.state_at(u).three_mass())


def _reference_survivor(rng: np.random.Generator, s: Dict[str, Any]) -> Optional[List[float]]:
    u = s["u"]
    reference = wf_reference(float_list(s["x0"]), s["du"], u, rng, dt=s["dt"])
    if reference.killed_at <= u:
        return None
    return list(reference.value_at(min(u, float(reference.u[-1]))))


@register("wf_killed_agreement", "killed 3-mass projection matches the BESQ reference", 10_000)
def wf_killed_agreement(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    s = _settings(params)
    s["x0"] = params.get("x0", WF_START)
    s["u"] = param(params, "u", 0.2)
    s["dt"] = param(params, "dt", DEFAULT_DT)
    s["max_level"] = param(params, "max_level", 1.0)
    projected = [r for r in map_paths(_projected_survivor, n_paths, seed, s) if r is not None]
    reference = [r for r in map_paths(_reference_survivor, n_paths, seed + 1, s) if r is not None]
    if not projected or not reference:
        raise VerificationError("No path survived to the comparison time")
    a, b = np.array(projected), np.array(reference)
    threshold = loosened(ks_threshold_two(len(a), len(b)))
    details = {f"ks_{name}": ks_two_sample(a[:, i], b[:, i]) for i, name in enumerate(COORDINATES)}
    details["survivors_projected"] = float(len(a))
    details["survivors_reference"] = float(len(b))
    statistic = normalized_ks([(details[f"ks_{name}"], threshold) for name in COORDINATES])
    return Outcome(
        statistic,
        0.0,
        1.0,
        "killed Wright-Fisher(-1/2, -1/2, 1/2)",
        min(len(a), len(b)),
        details,
    )


def _time_average(rng: np.random.Generator, s: Dict[str, Any]) -> List[float]:
    horizon = s["horizon"]
    path = _two_tree(rng, s, horizon)
    late = path.u >= 0.5 * horizon
    return list(path.three_mass()[late].mean(axis=0))


@register("wf_long_run_mean", "long-run averages of the resampled 3-mass process are 1/3", 200)
def wf_long_run_mean(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    s = _settings(params)
    s["x0"] = params.get("x0", RESAMPLING_START)
    s["horizon"] = param(params, "horizon", 20.0)
    averages = np.array(map_paths(_time_average, n_paths, seed, s))
    means = averages.mean(axis=0)
    se = averages.std(axis=0, ddof=1) / math.sqrt(n_paths)
    z = np.abs(means - 1.0 / 3.0) / np.maximum(se, 1e-12)
    details = {f"mean_{name}": float(m) for name, m in zip(COORDINATES, means)}
    details.update({f"se_{name}": float(e) for name, e in zip(COORDINATES, se)})
    return Outcome(float(z.max()), 0.0, 3.0, "Dir(1/2, 1/2, 1/2) means, in SE", n_paths, details)
