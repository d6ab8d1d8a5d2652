"""Tests for random streams, BESQ paths, samplers and goodness-of-fit helpers."""

import math

import numpy as np
import pytest

from skewer_lab.kernels import (
    DISCRETIZATION_ALLOWANCE,
    RngStream,
    SamplerError,
    besq_additivity_compose,
    besq_exact_step,
    besq_m1_killed_cdf,
    besq_m1_lifetime_cdf,
    besq_m1_survival,
    beta_cdf,
    exponential_cdf,
    gamma_cdf,
    kolmogorov_quantile,
    ks_statistic,
    ks_threshold_one,
    ks_threshold_two,
    ks_two_sample,
    overshoot_cdf,
    overshoot_ratio_from_uniform,
    path_stream,
    sample_besq_m1_hitting_times,
    sample_besq_m1_lifetime,
    sample_besq_marginal,
    sample_besq_path,
    sample_dirichlet_half,
    sample_gamma,
    sample_overshoot_ratio,
    sample_pd_largest_stickbreak,
    sample_pdip,
)


def test_streams_are_reproducible():
    """Test that equal keys give equal sequences and different keys differ."""
    a = path_stream(3, 7).random(5)
    b = path_stream(3, 7).random(5)
    c = path_stream(3, 8).random(5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_child_streams_differ():
    """Test that sub-streams are distinct from their parent."""
    parent = RngStream(1, 2)
    assert parent.child(0).key() != parent.key()
    assert parent.child(0).key() != parent.child(1).key()
    assert parent.child(0).key() == RngStream(1, 2, (0,)).key()


def test_besq_m1_path_is_absorbed():
    """Test that BESQ(-1) paths hit 0 and stay there."""
    path = sample_besq_path(1.0, -1.0, 1e-3, math.inf, path_stream(0, 0))
    assert math.isfinite(path.lifetime)
    assert path.values[0] == 1.0
    assert np.all(path.values >= 0)
    assert path.value_at(path.lifetime + 1.0) == 0.0


def test_besq_path_rejects_bad_arguments():
    """Test argument validation of the path sampler."""
    rng = path_stream(0, 0)
    with pytest.raises(SamplerError):
        sample_besq_path(1.0, 2.5, 1e-3, 1.0, rng)
    with pytest.raises(SamplerError):
        sample_besq_path(-1.0, -1.0, 1e-3, 1.0, rng)
    with pytest.raises(SamplerError):
        sample_besq_path(1.0, 1.0, 1e-3, math.inf, rng)


def test_besq_path_value_beyond_horizon_fails_while_alive():
    """Test that an alive path cannot be queried past its horizon."""
    path = sample_besq_path(1.0, 1.0, 1e-2, 0.5, path_stream(0, 1))
    assert path.horizon == pytest.approx(0.5)
    with pytest.raises(SamplerError):
        path.value_at(0.6)


def test_besq0_from_zero_is_dead():
    """Test the trivial BESQ(0) path from 0."""
    path = sample_besq_path(0.0, 0.0, 1e-3, math.inf, path_stream(0, 0))
    assert path.lifetime == 0.0
    assert path.value_at(0.3) == 0.0


def test_exact_step_mean_is_x_plus_dim_t():
    """Test E X_t = x + d t for the exact transition."""
    values = besq_exact_step(np.full(40_000, 1.0), 1.0, 0.5, path_stream(1, 0))
    assert values.mean() == pytest.approx(1.5, abs=0.05)


def test_marginal_at_zero_is_initial():
    """Test that the marginal at level 0 returns the initial values."""
    out = sample_besq_marginal([0.3, 0.7], -1.0, 0.0, path_stream(0, 0))
    assert list(out) == [0.3, 0.7]


def test_marginal_broadcasts_size():
    """Test that a scalar start with ``size`` gives ``size`` values."""
    out = sample_besq_marginal(1.0, -1.0, 0.1, path_stream(0, 0), size=50, dt=1e-2)
    assert out.shape == (50,)
    assert np.all(out >= 0)


def test_hitting_times_match_exact_lifetime_law():
    """Test Euler absorption levels against a / (2G)."""
    n = 3000
    levels = sample_besq_m1_hitting_times(1.0, path_stream(2, 0), size=n, dt=1e-3)
    distance = ks_statistic(levels, lambda t: besq_m1_lifetime_cdf(t, 1.0))
    assert distance < ks_threshold_one(n, DISCRETIZATION_ALLOWANCE)


def test_exact_lifetime_sampler():
    """Test the exact clock lifetime sampler and its CDF."""
    n = 5000
    levels = sample_besq_m1_lifetime(2.0, path_stream(3, 0), size=n)
    assert ks_statistic(levels, lambda t: besq_m1_lifetime_cdf(t, 2.0)) < ks_threshold_one(n)
    assert sample_besq_m1_lifetime(0.0, path_stream(3, 1)) == 0.0
    with pytest.raises(SamplerError):
        sample_besq_m1_lifetime(-1.0, path_stream(3, 1))


def test_lifetime_cdf_and_survival_agree():
    """Test that P(lifetime > y) is the complement of the lifetime CDF."""
    for x, y in [(1.0, 0.25), (0.5, 1.0), (2.0, 0.1)]:
        assert besq_m1_survival(x, y) == pytest.approx(1.0 - besq_m1_lifetime_cdf(y, x))
    assert besq_m1_survival(1.0, 0.0) == 1.0


def test_killed_cdf_tends_to_survival():
    """Test that the killed sub-distribution integrates to the survival probability."""
    x, y = 1.0, 0.25
    assert besq_m1_killed_cdf(x, y, 0.0) == 0.0
    assert besq_m1_killed_cdf(x, y, 50.0) == pytest.approx(besq_m1_survival(x, y), rel=1e-3)
    assert besq_m1_killed_cdf(x, y, 0.5) < besq_m1_killed_cdf(x, y, 1.0)


def test_additivity_compose_starts_at_sum():
    """Test that the glued path starts at a + b and is absorbed."""
    path = besq_additivity_compose(0.6, 0.4, 1e-3, path_stream(4, 0))
    assert path.x0 == pytest.approx(1.0)
    assert path.values[0] == pytest.approx(1.0)
    assert math.isfinite(path.lifetime)
    assert path.value_at(path.lifetime) == 0.0
    with pytest.raises(SamplerError):
        besq_additivity_compose(-0.1, 0.4, 1e-3, path_stream(4, 0))


def test_overshoot_ratio_inverse_cdf():
    """Test that the ratio sampler inverts (2/pi) arctan."""
    assert overshoot_ratio_from_uniform(0.5) == pytest.approx(1.0)
    r = np.array([0.1, 1.0, 10.0])
    assert np.allclose(overshoot_ratio_from_uniform(overshoot_cdf(r)), r)
    ratios = sample_overshoot_ratio(path_stream(5, 0), size=4000)
    assert np.all(ratios > 0)
    assert ks_statistic(ratios, overshoot_cdf) < ks_threshold_one(4000)


def test_dirichlet_half_on_simplex():
    """Test that Dirichlet draws are positive and sum to 1."""
    rng = path_stream(6, 0)
    for _ in range(100):
        x = sample_dirichlet_half(rng)
        assert min(x) >= 0
        assert sum(x) == pytest.approx(1.0)


def test_gamma_sampler_uses_rate():
    """Test the rate parametrization of the Gamma sampler."""
    draws = sample_gamma(0.5, 2.0, path_stream(7, 0), size=20_000)
    assert draws.mean() == pytest.approx(0.25, abs=0.01)
    with pytest.raises(SamplerError):
        sample_gamma(0.0, 1.0, path_stream(7, 0))


def test_pdip_has_unit_mass_and_diversity():
    """Test the oCRP approximation of a PDIP."""
    beta = sample_pdip(0.5, 256, path_stream(8, 0))
    assert beta.total_mass == pytest.approx(1.0)
    assert beta.annotated
    assert beta.diversity > 0
    with pytest.raises(SamplerError):
        sample_pdip(0.3, 256, path_stream(8, 0))
    with pytest.raises(SamplerError):
        sample_pdip(0.5, 0, path_stream(8, 0))


def test_stickbreak_largest_block_in_unit_interval():
    """Test the GEM stick-breaking oracle."""
    rng = path_stream(9, 0)
    values = [sample_pd_largest_stickbreak(0.5, 0.5, rng, n_sticks=200) for _ in range(50)]
    assert all(0 < v <= 1 for v in values)


def test_reference_cdfs():
    """Test closed forms of the reference CDFs."""
    assert exponential_cdf(1.0, 2.0) == pytest.approx(1.0 - math.exp(-2.0))
    assert gamma_cdf(-1.0, 0.5, 1.0) == 0.0
    # Beta(1/2, 1) has CDF sqrt(x)
    assert beta_cdf(0.25, 0.5, 1.0) == pytest.approx(0.5)
    assert overshoot_cdf(1.0) == pytest.approx(0.5)


def test_ks_helpers():
    """Test KS thresholds and empty-sample validation."""
    assert ks_threshold_one(10_000) == pytest.approx(0.0163)
    assert ks_threshold_two(100, 100) == pytest.approx(1.63 * math.sqrt(0.02))
    assert ks_two_sample([0.0, 1.0], [0.0, 1.0]) == 0.0
    with pytest.raises(SamplerError):
        ks_statistic([], overshoot_cdf)


def test_kolmogorov_quantile_near_table_value():
    """Test the simulated 1% Kolmogorov quantile."""
    quantile = kolmogorov_quantile(200, 0.01, 4000, path_stream(10, 0))
    assert quantile == pytest.approx(1.63, abs=0.1)
