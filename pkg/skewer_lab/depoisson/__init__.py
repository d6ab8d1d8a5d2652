"""De-Poissonization, the resampling 2-tree evolution and the Wright-Fisher reference."""

from .resampling import TwoTreePath, resampling_2tree, sample_stationary_state
from .time_change import (
    DEFAULT_DU,
    DePoissonizationError,
    DePoissonizedPath,
    depoissonize,
    integrated_clock,
)
from .wright_fisher import ThreeMassPath, intertwining_restart, project_3mass, wf_reference

__all__ = [
    "TwoTreePath",
    "resampling_2tree",
    "sample_stationary_state",
    "DEFAULT_DU",
    "DePoissonizationError",
    "DePoissonizedPath",
    "depoissonize",
    "integrated_clock",
    "ThreeMassPath",
    "intertwining_restart",
    "project_3mass",
    "wf_reference",
]
