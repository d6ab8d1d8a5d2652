"""Battery entries for scaffoldings: type-0/type-1 total masses and the truncated PRM."""

import math
from typing import Any, Dict

import numpy as np

from skewer_lab.kernels import (
    besq_exact_step,
    exponential_cdf,
    gamma_cdf,
    ks_statistic,
    ks_threshold_one,
    ks_threshold_two,
    ks_two_sample,
    path_stream,
)
from skewer_lab.partitions import IntervalPartition
from skewer_lab.scaffolding import (
    arrival_rate,
    prm_truncated_mode,
    sample_clade,
    sample_type0_data,
    sample_type1_measure,
)
from skewer_lab.type2 import (
    DEFAULT_N_APPROX,
    DEFAULT_SCALE_UNIT,
    sample_type0_pseudo_stationary,
    sample_type1_pseudo_stationary,
    surviving_rate,
)
from skewer_lab.verify.pool import map_paths
from skewer_lab.verify.registry import (
    Outcome,
    float_list,
    ks_outcome,
    largest_increase,
    loosened,
    normalized_ks,
    param,
    register,
)

SCALE_UNITS = (1.0 / 64, 1.0 / 128, 1.0 / 256)


def _clade_mass(rng: np.random.Generator, params: Dict[str, Any]) -> float:
    clade = sample_clade(params["x"], params["scale_unit"], rng)
    return clade.aggregate_mass(params["y"])


def _type0_mass(rng: np.random.Generator, params: Dict[str, Any]) -> float:
    beta = IntervalPartition.from_masses([params["x"]])
    data = sample_type0_data(beta, params["scale_unit"], params["y"], rng)
    return data.total_mass(params["y"])


def _settings(params: Dict[str, Any]) -> Dict[str, Any]:
    return {
        "x": param(params, "x", 1.0),
        "y": param(params, "y", 0.5),
        "scale_unit": param(params, "scale_unit", DEFAULT_SCALE_UNIT),
    }


def _exact_besq(x: float, dim: float, y: float, n: int, rng: np.random.Generator) -> np.ndarray:
    return besq_exact_step(np.full(n, x), dim, y, rng)


@register("type1_total_mass", "clade total mass is BESQ(0)", default_paths=2000)
def type1_total_mass(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    settings = _settings(params)
    masses = map_paths(_clade_mass, n_paths, seed, settings)
    exact = _exact_besq(settings["x"], 0.0, settings["y"], n_paths, path_stream(seed, n_paths))
    distance = ks_two_sample(masses, exact)
    threshold = loosened(ks_threshold_two(n_paths, n_paths))
    return ks_outcome(distance, threshold, "BESQ_x(0)", n_paths, **settings)


@register("type0_total_mass", "type-0 total mass is BESQ(1)", default_paths=2000)
def type0_total_mass(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    settings = _settings(params)
    masses = map_paths(_type0_mass, n_paths, seed, settings)
    exact = _exact_besq(settings["x"], 1.0, settings["y"], n_paths, path_stream(seed, n_paths))
    distance = ks_two_sample(masses, exact)
    threshold = loosened(ks_threshold_two(n_paths, n_paths))
    return ks_outcome(distance, threshold, "BESQ_x(1)", n_paths, **settings)


@register("clade_scaling", "total masses approach BESQ as the scale unit shrinks", 1000)
def clade_scaling(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    base = _settings(params)
    scale_units = sorted(float_list(params.get("scale_units", SCALE_UNITS)), reverse=True)
    threshold = loosened(ks_threshold_two(n_paths, n_paths))
    # sampling noise allowed on a rise between consecutive scale units
    band = param(params, "band", ks_threshold_two(n_paths, n_paths) / 2.0)
    details: Dict[str, Any] = {"band": band}
    ratios = []
    for label, sampler, dim in (("type1", _clade_mass, 0.0), ("type0", _type0_mass, 1.0)):
        exact = _exact_besq(base["x"], dim, base["y"], n_paths, path_stream(seed, n_paths))
        distances = []
        for scale_unit in scale_units:
            masses = map_paths(sampler, n_paths, seed, {**base, "scale_unit": scale_unit})
            distances.append(ks_two_sample(masses, exact))
            details[f"ks_{label}_{scale_unit:.6g}"] = distances[-1]
        rise = largest_increase(distances)
        details[f"rise_{label}"] = rise
        ratios.append(normalized_ks([(d, threshold) for d in distances]))
        ratios.append(rise / band)
    return Outcome(
        max(ratios), 0.0, 1.0, "BESQ_x(0) and BESQ_x(1), nonincreasing", n_paths, details
    )


def _type1_pseudo(rng: np.random.Generator, params: Dict[str, Any]) -> float:
    beta = sample_type1_pseudo_stationary(params["gamma"], rng, params["n_approx"])
    measure = sample_type1_measure(beta, params["scale_unit"], rng)
    return measure.aggregate_mass(params["y"])


def _type0_pseudo(rng: np.random.Generator, params: Dict[str, Any]) -> float:
    beta = sample_type0_pseudo_stationary(params["gamma"], rng, params["n_approx"])
    data = sample_type0_data(beta, params["scale_unit"], params["y"], rng)
    return data.total_mass(params["y"])


def _pseudo_settings(params: Dict[str, Any]) -> Dict[str, Any]:
    return {
        "gamma": param(params, "gamma", 1.0),
        "y": param(params, "y", 0.5),
        "scale_unit": param(params, "scale_unit", DEFAULT_SCALE_UNIT),
        "n_approx": param(params, "n_approx", DEFAULT_N_APPROX, int),
    }


@register("type1_pseudo_stationary", "surviving type-1 mass is Exponential", 2000)
def type1_pseudo_stationary(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    settings = _pseudo_settings(params)
    masses = np.array(map_paths(_type1_pseudo, n_paths, seed, settings))
    alive = masses[masses > 0]
    rate = surviving_rate(settings["y"], settings["gamma"])
    distance = ks_statistic(alive, lambda x: exponential_cdf(x, rate))
    threshold = loosened(ks_threshold_one(len(alive)))
    return ks_outcome(distance, threshold, "Exponential(gamma / (2 y gamma + 1))", len(alive))


@register("type0_pseudo_stationary", "type-0 mass stays Gamma(1/2, .)", 2000)
def type0_pseudo_stationary(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    settings = _pseudo_settings(params)
    masses = map_paths(_type0_pseudo, n_paths, seed, settings)
    rate = surviving_rate(settings["y"], settings["gamma"])
    distance = ks_statistic(masses, lambda x: gamma_cdf(x, 0.5, rate))
    threshold = loosened(ks_threshold_one(n_paths))
    return ks_outcome(distance, threshold, "Gamma(1/2, gamma / (2 y gamma + 1))", n_paths)


def _prm_count(rng: np.random.Generator, params: Dict[str, Any]) -> int:
    return len(prm_truncated_mode(params["z"], params["horizon"], rng))


@register("prm_arrival_rate", "spindles above z arrive at the Levy-measure rate", 2000)
def prm_arrival_rate(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    settings = {"z": param(params, "z", 0.2), "horizon": param(params, "horizon", 1.0)}
    counts = np.array(map_paths(_prm_count, n_paths, seed, settings), dtype=float)
    expected = arrival_rate(settings["z"]) * settings["horizon"]
    tolerance = 3.0 * math.sqrt(expected / n_paths)
    return Outcome(float(counts.mean()), expected, tolerance, "Poisson intensity", n_paths)
