"""Battery entries for the stochastic kernels: BESQ laws, overshoots and elementary samplers."""

import math
from typing import Any, Dict

import numpy as np

from skewer_lab.kernels import (
    DEFAULT_DT,
    besq_additivity_compose,
    besq_exact_step,
    besq_m1_killed_cdf,
    besq_m1_lifetime_cdf,
    besq_m1_survival,
    kolmogorov_quantile,
    ks_statistic,
    ks_threshold_one,
    ks_threshold_two,
    ks_two_sample,
    path_stream,
    sample_besq_m1_hitting_times,
    sample_besq_m1_lifetime,
    sample_besq_marginal,
    sample_dirichlet_half,
    sample_overshoot_ratio,
    sample_pd_largest_stickbreak,
    sample_pdip,
)
from skewer_lab.kernels.stats import KS_ONE_PERCENT
from skewer_lab.verify.pool import map_paths
from skewer_lab.verify.registry import (
    Outcome,
    ks_outcome,
    loosened,
    normalized_ks,
    param,
    register,
)

# density of the Kolmogorov distribution near its upper 1% point
KOLMOGOROV_DENSITY_AT_ONE_PERCENT = 0.064
BETA_HALF_ONE_VARIANCE = 0.5 / (1.5**2 * 2.5)


@register("overshoot_log_mean", "mean log overshoot ratio is 0", default_paths=10**6)
def overshoot_log_mean(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    ratios = sample_overshoot_ratio(path_stream(seed, 0), size=n_paths)
    # log of the ratio has standard deviation pi / 2
    tolerance = 3.0 * (math.pi / 2.0) / math.sqrt(n_paths)
    return Outcome(float(np.mean(np.log(ratios))), 0.0, tolerance, "E log R = 0", n_paths)


@register("overshoot_median", "median overshoot ratio is 1", default_paths=10**6)
def overshoot_median(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    ratios = sample_overshoot_ratio(path_stream(seed, 0), size=n_paths)
    tolerance = max(0.01, 3.0 * math.pi / (2.0 * math.sqrt(n_paths)))
    return Outcome(float(np.median(ratios)), 1.0, tolerance, "P(R <= 1) = 1/2", n_paths)


@register("clock_level_exact", "first clock level is a / (2G)", default_paths=50_000)
def clock_level_exact(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    a = param(params, "a", 1.0)
    levels = sample_besq_m1_lifetime(a, path_stream(seed, 0), size=n_paths)
    distance = ks_statistic(levels, lambda t: besq_m1_lifetime_cdf(t, a))
    return ks_outcome(distance, ks_threshold_one(n_paths), "a / (2 Gamma(3/2))", n_paths)


@register("clock_level_euler", "Euler BESQ(-1) absorption levels match a / (2G)", 20_000)
def clock_level_euler(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    a = param(params, "a", 1.0)
    dt = param(params, "dt", DEFAULT_DT)
    levels = sample_besq_m1_hitting_times(a, path_stream(seed, 0), size=n_paths, dt=dt)
    distance = ks_statistic(levels, lambda t: besq_m1_lifetime_cdf(t, a))
    threshold = loosened(ks_threshold_one(n_paths))
    return ks_outcome(distance, threshold, "a / (2 Gamma(3/2))", n_paths, dt=dt)


def _additivity_sample(rng: np.random.Generator, params: Dict[str, Any]):
    path = besq_additivity_compose(params["a"], params["b"], params["dt"], rng)
    return float(path.value_at(params["y"])), float(path.lifetime)


@register("besq_additivity", "BESQ_a(-1) + BESQ_b(0) glued into BESQ_{a+b}(-1)", 20_000)
def besq_additivity(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    settings = {
        "a": param(params, "a", 0.6),
        "b": param(params, "b", 0.4),
        "y": param(params, "y", 0.25),
        "dt": param(params, "dt", DEFAULT_DT),
    }
    composed = np.array(map_paths(_additivity_sample, n_paths, seed, settings))
    total = settings["a"] + settings["b"]
    rng = path_stream(seed, n_paths)
    direct = sample_besq_marginal(total, -1.0, settings["y"], rng, size=n_paths, dt=settings["dt"])
    marginal = ks_two_sample(composed[:, 0], direct)
    lifetime = ks_statistic(composed[:, 1], lambda t: besq_m1_lifetime_cdf(t, total))
    statistic = normalized_ks(
        [
            (marginal, loosened(ks_threshold_two(n_paths, n_paths))),
            (lifetime, loosened(ks_threshold_one(n_paths))),
        ]
    )
    return Outcome(
        statistic,
        0.0,
        1.0,
        "BESQ_{a+b}(-1) marginal and lifetime",
        n_paths,
        {"ks_marginal": marginal, "ks_lifetime": lifetime},
    )


@register("besq0_martingale", "BESQ(0) has constant mean", default_paths=100_000)
def besq0_martingale(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    x = param(params, "x", 1.0)
    y = param(params, "y", 0.5)
    values = besq_exact_step(np.full(n_paths, x), 0.0, y, path_stream(seed, 0))
    tolerance = 3.0 * math.sqrt(4.0 * x * y / n_paths)
    return Outcome(float(values.mean()), x, tolerance, "E X_y = x", n_paths)


def _tabulated_cdf(cdf, upper: float, points: int = 200):
    grid = np.linspace(0.0, upper, points)
    values = np.array([cdf(z) for z in grid])
    return lambda z: np.interp(z, grid, values, right=1.0)


@register("besq_grid_refinement", "Euler BESQ(-1) marginal against the exact killed law", 20_000)
def besq_grid_refinement(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    x = param(params, "x", 1.0)
    y = param(params, "y", 0.25)
    dt = param(params, "dt", DEFAULT_DT)
    values = sample_besq_marginal(x, -1.0, y, path_stream(seed, 0), size=n_paths, dt=dt)
    alive = values[values > 0]
    survival = besq_m1_survival(x, y)
    cdf = _tabulated_cdf(lambda z: besq_m1_killed_cdf(x, y, z) / survival, float(alive.max()))
    distance = ks_statistic(alive, cdf)
    return ks_outcome(
        distance,
        loosened(ks_threshold_one(len(alive))),
        "killed BESQ(-1) via BESQ(5) h-transform",
        len(alive),
        dt=dt,
        killed_fraction=1.0 - len(alive) / n_paths,
        killed_reference=1.0 - survival,
    )


@register("besq_scaling", "lifetimes of BESQ_2(-1) are twice those of BESQ_1(-1)", 20_000)
def besq_scaling(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    c = param(params, "c", 2.0)
    dt = param(params, "dt", DEFAULT_DT)
    large = sample_besq_m1_hitting_times(c, path_stream(seed, 0), size=n_paths, dt=dt)
    unit = sample_besq_m1_hitting_times(1.0, path_stream(seed, 1), size=n_paths, dt=dt)
    distance = ks_two_sample(large, c * unit)
    threshold = loosened(ks_threshold_two(n_paths, n_paths))
    return ks_outcome(distance, threshold, "BESQ scaling", n_paths, c=c)


@register("dirichlet_moments", "Dir(1/2, 1/2, 1/2) coordinate means are 1/3", 20_000)
def dirichlet_moments(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    rng = path_stream(seed, 0)
    samples = np.array([sample_dirichlet_half(rng) for _ in range(n_paths)])
    deviation = float(np.abs(samples.mean(axis=0) - 1.0 / 3.0).max())
    tolerance = 3.0 * math.sqrt(BETA_HALF_ONE_VARIANCE / n_paths)
    return Outcome(deviation, 0.0, tolerance, "Beta(1/2, 1) marginals", n_paths)


def _pdip_largest(rng: np.random.Generator, params: Dict[str, Any]) -> float:
    return max(sample_pdip(params["theta2"], params["n_approx"], rng).masses)


@register("pdip_largest_block", "largest PDIP block against GEM stick-breaking", 5000)
def pdip_largest_block(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    settings = {
        "theta2": param(params, "theta2", 0.5),
        "n_approx": param(params, "n_approx", 1024, int),
    }
    ocrp = map_paths(_pdip_largest, n_paths, seed, settings)
    rng = path_stream(seed, n_paths)
    gem = [sample_pd_largest_stickbreak(0.5, settings["theta2"], rng) for _ in range(n_paths)]
    distance = ks_two_sample(ocrp, gem)
    threshold = loosened(ks_threshold_two(n_paths, n_paths))
    return ks_outcome(distance, threshold, "PD(1/2, theta) largest block", n_paths, **settings)


@register("ks_calibration", "simulated 1% Kolmogorov quantile matches 1.63", default_paths=2000)
def ks_calibration(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    size = param(params, "sample_size", 1000, int)
    quantile = kolmogorov_quantile(size, 0.01, n_paths, path_stream(seed, 0))
    se = math.sqrt(0.01 * 0.99 / n_paths) / KOLMOGOROV_DENSITY_AT_ONE_PERCENT
    tolerance = max(0.05, 3.0 * se)
    return Outcome(quantile, KS_ONE_PERCENT, tolerance, "Kolmogorov 1% quantile", n_paths)
