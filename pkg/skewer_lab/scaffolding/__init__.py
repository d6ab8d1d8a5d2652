"""Spindles, marked scaffoldings, clades and the skewer map."""

from .measures import (
    MarkedScaffolding,
    Type0Data,
    Type1Data,
    aggregate_mass,
    birth_death_spindle,
    clade_from_left,
    concatenate_measures,
    empty_scaffolding,
    initial_population,
    sample_clade,
    sample_immigrants,
    sample_type0_data,
    sample_type1_data,
    sample_type1_measure,
    scaffolding_from_tree,
    skewer,
    total_mass_path,
)
from .prm import (
    arrival_rate,
    compensation_rate,
    lifetime_tail,
    prm_truncated_mode,
    reversed_besq_shape,
    sample_lifetimes,
)
from .spindles import ScaffoldingError, SpindlePath, level_unit, time_unit

__all__ = [
    "MarkedScaffolding",
    "Type0Data",
    "Type1Data",
    "aggregate_mass",
    "birth_death_spindle",
    "clade_from_left",
    "concatenate_measures",
    "empty_scaffolding",
    "initial_population",
    "sample_clade",
    "sample_immigrants",
    "sample_type0_data",
    "sample_type1_data",
    "sample_type1_measure",
    "scaffolding_from_tree",
    "skewer",
    "total_mass_path",
    "arrival_rate",
    "compensation_rate",
    "lifetime_tail",
    "prm_truncated_mode",
    "reversed_besq_shape",
    "sample_lifetimes",
    "ScaffoldingError",
    "SpindlePath",
    "level_unit",
    "time_unit",
]
