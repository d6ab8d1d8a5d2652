"""Battery entries with exact answers: the partition metric and the discrete chains."""

import logging
from typing import Any, Dict

import numpy as np

from skewer_lab.chains import (
    ChainError,
    CrpConfig,
    CrpParams,
    aldous_transition_matrix,
    check_projection_lumpable,
    discrete_skewer,
    simulate_poissonized,
    splitting_tree_from_trace,
    stationary_is_uniform,
    to_jccp,
)
from skewer_lab.kernels import path_stream
from skewer_lab.partitions import IntervalPartition, brute_force_distance, dip_distance
from skewer_lab.verify.pool import map_paths
from skewer_lab.verify.registry import Outcome, param, register

logger = logging.getLogger(__name__)

METRIC_TOLERANCE = 1e-9


def random_annotated_partition(rng: np.random.Generator, max_blocks: int) -> IntervalPartition:
    """Random masses and nondecreasing diversities with up to ``max_blocks`` blocks."""
    k = int(rng.integers(0, max_blocks + 1))
    masses = tuple(float(m) for m in rng.exponential(1.0, size=k) + 1e-3)
    div_left = tuple(float(d) for d in np.cumsum(rng.exponential(0.5, size=k)))
    total = (div_left[-1] if k else 0.0) + float(rng.exponential(0.5))
    return IntervalPartition(masses, div_left, total)


@register("d_metric_oracle", "exact distance equals exhaustive enumeration", default_paths=500)
def d_metric_oracle(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    max_blocks = param(params, "max_blocks", 6, int)
    rng = path_stream(seed, 0)
    mismatches = 0
    for _ in range(n_paths):
        beta = random_annotated_partition(rng, max_blocks)
        gamma = random_annotated_partition(rng, max_blocks)
        exact = dip_distance(beta, gamma).value
        brute = brute_force_distance(beta, gamma).value
        mismatches += abs(exact - brute) > METRIC_TOLERANCE
    return Outcome(float(mismatches), 0.0, 0.0, "exhaustive correspondences", n_paths)


@register("d_metric_axioms", "symmetry and triangle inequality", default_paths=500)
def d_metric_axioms(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    max_blocks = param(params, "max_blocks", 6, int)
    rng = path_stream(seed, 0)
    violations = 0
    for _ in range(n_paths):
        a, b, c = (random_annotated_partition(rng, max_blocks) for _ in range(3))
        ab, ba = dip_distance(a, b).value, dip_distance(b, a).value
        bc, ac = dip_distance(b, c).value, dip_distance(a, c).value
        violations += abs(ab - ba) > METRIC_TOLERANCE
        violations += ac > ab + bc + METRIC_TOLERANCE
    return Outcome(float(violations), 0.0, 0.0, "metric axioms", n_paths)


@register("aldous_stationary", "Aldous chain has the uniform stationary law", default_paths=1)
def aldous_stationary(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    sizes = (3, 4)
    failures = 0
    for n in sizes:
        _, rows = aldous_transition_matrix(n)
        failures += not stationary_is_uniform(rows)
    return Outcome(float(failures), 0.0, 0.0, "exact transition matrices", len(sizes))


@register("two_tree_lumpability", "projected full-tree chain equals the 2-tree chain", 1)
def two_tree_lumpability(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    max_leaves = param(params, "max_leaves", 6, int)
    mismatches = 0
    for n in range(3, max_leaves + 1):
        mismatches += len(check_projection_lumpable(n))
    return Outcome(float(mismatches), 0.0, 0.0, "exact transition kernels", max_leaves - 2)


def _skewer_mismatches(rng: np.random.Generator, params: Dict[str, Any]):
    """Compare a recorded chain with the skewer of its rebuilt splitting tree between events."""
    config = CrpConfig(tuple(params["tables"]), CrpParams.HALF_ZERO)
    trace = simulate_poissonized(config, float("inf"), rng, max_events=params["max_events"])
    try:
        jccp = to_jccp(splitting_tree_from_trace(trace))
    except ChainError:
        return None
    mismatches = 0
    for t0, t1 in zip(trace.times, trace.times[1:]):
        mid = 0.5 * (t0 + t1)
        mismatches += discrete_skewer(jccp, mid).tables != trace.config_at(mid).tables
    return mismatches


@register("skewer_crp_consistency", "skewer of the splitting tree is the (1/2, 0) chain", 200)
def skewer_crp_consistency(n_paths: int, seed: int, params: Dict[str, Any]) -> Outcome:
    settings = {
        "tables": tuple(int(m) for m in str(params.get("tables", "2,1")).split(",")),
        "max_events": param(params, "max_events", 100_000, int),
    }
    results = map_paths(_skewer_mismatches, n_paths, seed, settings)
    finished = [r for r in results if r is not None]
    if len(finished) < len(results):
        logger.info("%d runs did not die out and were skipped", len(results) - len(finished))
    return Outcome(
        float(sum(finished)),
        0.0,
        0.0,
        "pathwise identity",
        len(finished),
        {"skipped": float(len(results) - len(finished))},
    )
