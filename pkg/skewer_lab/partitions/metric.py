"""The distance d_I between annotated interval partitions.

A correspondence matches blocks of two partitions in an order-preserving way. Its distortion is
the maximum of four quantities:

1. the largest difference of left diversities over matched pairs,
2. the difference of total diversities,
3. the summed mass differences over matched pairs plus the unmatched mass of the first partition,
4. the same with the unmatched mass of the second partition.

The distance is the minimum distortion over all correspondences.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Iterator, List, Tuple

import numpy as np

from skewer_lab.partitions.interval_partition import IntervalPartition, PartitionError

logger = logging.getLogger(__name__)

DEFAULT_EXACT_THRESHOLD = 10


@dataclass(frozen=True)
class Correspondence:
    """Order-preserving matching of block indices."""

    pairs: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        pairs = tuple((int(i), int(j)) for i, j in self.pairs)
        for (i0, j0), (i1, j1) in zip(pairs, pairs[1:]):
            if not (i1 > i0 and j1 > j0):
                raise PartitionError(f"Correspondence is not increasing: {pairs}")
        object.__setattr__(self, "pairs", pairs)

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class DistanceResult:
    """Distance value; ``exact`` is False when it is only an upper bound."""

    value: float
    exact: bool
    correspondence: Correspondence

    def __float__(self) -> float:
        return self.value


def _pair_terms(beta: IntervalPartition, gamma: IntervalPartition, i: int, j: int):
    div_gap = abs(beta.diversity_at(i) - gamma.diversity_at(j))
    gap = abs(beta.masses[i] - gamma.masses[j])
    return div_gap, gap - beta.masses[i], gap - gamma.masses[j]


def distortion(
    beta: IntervalPartition, gamma: IntervalPartition, correspondence: Correspondence
) -> float:
    """Distortion of ``correspondence`` from ``beta`` to ``gamma``."""
    for i, j in correspondence.pairs:
        if not (0 <= i < len(beta) and 0 <= j < len(gamma)):
            raise PartitionError(f"Pair ({i}, {j}) out of range")
    sup_div = 0.0
    mass_gap = 0.0
    matched_beta = 0.0
    matched_gamma = 0.0
    for i, j in correspondence.pairs:
        sup_div = max(sup_div, abs(beta.diversity_at(i) - gamma.diversity_at(j)))
        mass_gap += abs(beta.masses[i] - gamma.masses[j])
        matched_beta += beta.masses[i]
        matched_gamma += gamma.masses[j]
    return max(
        sup_div,
        abs(beta.diversity - gamma.diversity),
        mass_gap + beta.total_mass - matched_beta,
        mass_gap + gamma.total_mass - matched_gamma,
    )


def enumerate_correspondences(k: int, l: int) -> Iterator[Correspondence]:
    """All correspondences between partitions with ``k`` and ``l`` blocks."""
    for size in range(min(k, l) + 1):
        for left in itertools.combinations(range(k), size):
            for right in itertools.combinations(range(l), size):
                yield Correspondence(tuple(zip(left, right)))


def brute_force_distance(beta: IntervalPartition, gamma: IntervalPartition) -> DistanceResult:
    """Exhaustive minimum over every correspondence."""
    best = None
    for corr in enumerate_correspondences(len(beta), len(gamma)):
        value = distortion(beta, gamma, corr)
        if best is None or value < best.value:
            best = DistanceResult(value, True, corr)
    return best


def _pareto(items: List[tuple]) -> List[tuple]:
    """Keep items not dominated in the first three coordinates."""
    items = sorted(items, key=lambda it: (it[0], it[1], it[2]))
    kept: List[tuple] = []
    for item in items:
        if any(k[0] <= item[0] and k[1] <= item[1] and k[2] <= item[2] for k in kept):
            continue
        kept.append(item)
    return kept


def _exact_distance(beta: IntervalPartition, gamma: IntervalPartition) -> DistanceResult:
    # Frontier items: (sup diversity gap, sum of gap - u, sum of gap - v, pairs).
    k, l = len(beta), len(gamma)
    total_gap = abs(beta.diversity - gamma.diversity)
    ending = [[[] for _ in range(l)] for _ in range(k)]
    upto = [[[] for _ in range(l)] for _ in range(k)]

    for i in range(k):
        for j in range(l):
            div_gap, a, b = _pair_terms(beta, gamma, i, j)
            candidates = [(div_gap, a, b, ((i, j),))]
            if i > 0 and j > 0:
                for q, sa, sb, pairs in upto[i - 1][j - 1]:
                    candidates.append((max(q, div_gap), sa + a, sb + b, pairs + ((i, j),)))
            ending[i][j] = _pareto(candidates)
            merged = list(ending[i][j])
            if i > 0:
                merged.extend(upto[i - 1][j])
            if j > 0:
                merged.extend(upto[i][j - 1])
            upto[i][j] = _pareto(merged)

    best_value = max(total_gap, beta.total_mass, gamma.total_mass)
    best_pairs: tuple = ()
    if k and l:
        for _, _, _, pairs in upto[k - 1][l - 1]:
            value = distortion(beta, gamma, Correspondence(pairs))
            if value < best_value:
                best_value, best_pairs = value, pairs
    return DistanceResult(best_value, True, Correspondence(best_pairs))


def _greedy_distance(beta: IntervalPartition, gamma: IntervalPartition) -> DistanceResult:
    order_beta = np.argsort(-beta.as_array(), kind="stable")
    order_gamma = np.argsort(-gamma.as_array(), kind="stable")
    best = DistanceResult(distortion(beta, gamma, Correspondence()), False, Correspondence())
    for size in range(1, min(len(beta), len(gamma)) + 1):
        left = sorted(order_beta[:size].tolist())
        right = sorted(order_gamma[:size].tolist())
        corr = Correspondence(tuple(zip(left, right)))
        value = distortion(beta, gamma, corr)
        if value < best.value:
            best = DistanceResult(value, False, corr)
    return best


def dip_distance(
    beta: IntervalPartition,
    gamma: IntervalPartition,
    exact_threshold: int = DEFAULT_EXACT_THRESHOLD,
) -> DistanceResult:
    """Distance between two partitions.

    Exact (Pareto dynamic program over increasing matchings) when both partitions have at most
    ``exact_threshold`` blocks; otherwise an upper bound from matching the k largest blocks of
    each side by rank, minimized over k.
    """
    if max(len(beta), len(gamma)) <= exact_threshold:
        return _exact_distance(beta, gamma)
    logger.debug(
        "Partitions with %d and %d blocks exceed exact threshold %d, using greedy bound",
        len(beta),
        len(gamma),
        exact_threshold,
    )
    return _greedy_distance(beta, gamma)
