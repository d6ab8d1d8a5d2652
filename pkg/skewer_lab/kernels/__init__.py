"""Random streams and elementary samplers."""

from .besq import (
    DEFAULT_DT,
    BesqPath,
    besq_additivity_compose,
    besq_exact_step,
    besq_m1_killed_cdf,
    besq_m1_lifetime_cdf,
    besq_m1_survival,
    sample_besq_m1_hitting_times,
    sample_besq_marginal,
    sample_besq_path,
)
from .rng import RngStream, path_stream
from .samplers import (
    SamplerError,
    draw_seed,
    grow_ordered_tables,
    overshoot_ratio_from_uniform,
    sample_besq_m1_lifetime,
    sample_beta,
    sample_dirichlet_half,
    sample_gamma,
    sample_overshoot_ratio,
    sample_pd_largest_stickbreak,
    sample_pdip,
)
from .stats import (
    DISCRETIZATION_ALLOWANCE,
    beta_cdf,
    exponential_cdf,
    gamma_cdf,
    kolmogorov_quantile,
    ks_statistic,
    ks_threshold_one,
    ks_threshold_two,
    ks_two_sample,
    overshoot_cdf,
)

__all__ = [
    "DEFAULT_DT",
    "BesqPath",
    "besq_additivity_compose",
    "besq_exact_step",
    "besq_m1_killed_cdf",
    "besq_m1_lifetime_cdf",
    "besq_m1_survival",
    "sample_besq_m1_hitting_times",
    "sample_besq_marginal",
    "sample_besq_path",
    "RngStream",
    "path_stream",
    "SamplerError",
    "draw_seed",
    "grow_ordered_tables",
    "overshoot_ratio_from_uniform",
    "sample_besq_m1_lifetime",
    "sample_beta",
    "sample_dirichlet_half",
    "sample_gamma",
    "sample_overshoot_ratio",
    "sample_pd_largest_stickbreak",
    "sample_pdip",
    "DISCRETIZATION_ALLOWANCE",
    "beta_cdf",
    "exponential_cdf",
    "gamma_cdf",
    "kolmogorov_quantile",
    "ks_statistic",
    "ks_threshold_one",
    "ks_threshold_two",
    "ks_two_sample",
    "overshoot_cdf",
]
