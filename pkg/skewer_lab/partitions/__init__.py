"""Interval partitions, diversity and the d_I metric."""

from .interval_partition import (
    EMPTY,
    IntervalPartition,
    PartitionError,
    annotate_diversity,
    concatenate,
    concatenate_all,
    diversity_estimate,
    scale,
)
from .metric import (
    Correspondence,
    DistanceResult,
    brute_force_distance,
    dip_distance,
    distortion,
    enumerate_correspondences,
)

__all__ = [
    "EMPTY",
    "IntervalPartition",
    "PartitionError",
    "annotate_diversity",
    "concatenate",
    "concatenate_all",
    "diversity_estimate",
    "scale",
    "Correspondence",
    "DistanceResult",
    "brute_force_distance",
    "dip_distance",
    "distortion",
    "enumerate_correspondences",
]
