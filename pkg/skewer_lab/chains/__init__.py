"""Discrete chains: Aldous trees, 2-trees, ordered CRPs, splitting trees."""

from .crp import (
    ChainTrace,
    CrpConfig,
    CrpParams,
    TableRecord,
    event_rates,
    expected_drift,
    grow_ocrp,
    ocrp_downup_step,
    ocrp_seat,
    poissonized_step,
    seating_probabilities,
    simulate_poissonized,
    total_rate,
)
from .splitting import (
    DiscreteJccp,
    SplittingTree,
    TableNode,
    birth_death_lifeline,
    build_splitting_tree,
    discrete_skewer,
    splitting_tree_from_trace,
    to_jccp,
)
from .trees import (
    DEGENERATE,
    BinaryTree,
    ChainDegenerated,
    ChainError,
    TwoTree,
    aldous_downup_step,
    aldous_transition_matrix,
    check_projection_lumpable,
    enumerate_trees,
    project_tracked,
    project_two_tree,
    projected_full_tree_transition,
    stationary_is_uniform,
    two_tree_downup_step,
    two_tree_transition,
    up_move_probabilities,
)

__all__ = [
    "ChainTrace",
    "CrpConfig",
    "CrpParams",
    "TableRecord",
    "event_rates",
    "expected_drift",
    "grow_ocrp",
    "ocrp_downup_step",
    "ocrp_seat",
    "poissonized_step",
    "seating_probabilities",
    "simulate_poissonized",
    "total_rate",
    "DiscreteJccp",
    "SplittingTree",
    "TableNode",
    "birth_death_lifeline",
    "build_splitting_tree",
    "discrete_skewer",
    "splitting_tree_from_trace",
    "to_jccp",
    "DEGENERATE",
    "BinaryTree",
    "ChainDegenerated",
    "ChainError",
    "TwoTree",
    "aldous_downup_step",
    "aldous_transition_matrix",
    "check_projection_lumpable",
    "enumerate_trees",
    "project_tracked",
    "project_two_tree",
    "projected_full_tree_transition",
    "stationary_is_uniform",
    "two_tree_downup_step",
    "two_tree_transition",
    "up_move_probabilities",
]
