"""Type-2 evolutions: alternating, deletion clocking and interweaving constructions."""

from .alternating import DEFAULT_SCALE_UNIT, MAX_CLOCK_CHANGES, type2_alternating
from .clocking import ClockingInputs, sample_clocking_inputs, type2_deletion_clocking
from .dispatch import CONSTRUCTIONS, pseudo_stationary_path, type2_path
from .initial import (
    DEFAULT_N_APPROX,
    degeneration_survival,
    quantize_mass,
    quantize_partition,
    quantize_state,
    sample_pseudo_stationary_state,
    sample_scaled_pdip,
    sample_type0_pseudo_stationary,
    sample_type1_pseudo_stationary,
    surviving_rate,
)
from .interweaving import (
    InterweavingInputs,
    interweave_levels,
    sample_interweaving_inputs,
    type2_interweaving,
)
from .states import (
    ABSORBED,
    DEFAULT_DY,
    Type2Error,
    Type2Path,
    Type2State,
    clock_index_for,
    degeneration,
    record_path,
    total_mass,
)

__all__ = [
    "DEFAULT_SCALE_UNIT",
    "MAX_CLOCK_CHANGES",
    "type2_alternating",
    "ClockingInputs",
    "sample_clocking_inputs",
    "type2_deletion_clocking",
    "CONSTRUCTIONS",
    "pseudo_stationary_path",
    "type2_path",
    "DEFAULT_N_APPROX",
    "degeneration_survival",
    "quantize_mass",
    "quantize_partition",
    "quantize_state",
    "sample_pseudo_stationary_state",
    "sample_scaled_pdip",
    "sample_type0_pseudo_stationary",
    "sample_type1_pseudo_stationary",
    "surviving_rate",
    "InterweavingInputs",
    "interweave_levels",
    "sample_interweaving_inputs",
    "type2_interweaving",
    "ABSORBED",
    "DEFAULT_DY",
    "Type2Error",
    "Type2Path",
    "Type2State",
    "clock_index_for",
    "degeneration",
    "record_path",
    "total_mass",
]
