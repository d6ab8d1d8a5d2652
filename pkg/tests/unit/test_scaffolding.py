"""Tests for spindles, marked scaffoldings and the skewer map."""

import math

import numpy as np
import pytest

from skewer_lab.kernels import path_stream
from skewer_lab.partitions import IntervalPartition
from skewer_lab.scaffolding import (
    MarkedScaffolding,
    ScaffoldingError,
    SpindlePath,
    Type0Data,
    arrival_rate,
    birth_death_spindle,
    clade_from_left,
    compensation_rate,
    concatenate_measures,
    empty_scaffolding,
    initial_population,
    level_unit,
    lifetime_tail,
    prm_truncated_mode,
    reversed_besq_shape,
    sample_clade,
    sample_immigrants,
    sample_lifetimes,
    sample_type1_data,
    sample_type1_measure,
    skewer,
    time_unit,
    total_mass_path,
)

SCALE = 1.0 / 64


@pytest.fixture
def step_spindle():
    """Piecewise constant spindle 3 on [0, 1), 2 on [1, 2)."""
    return SpindlePath(0.0, np.array([0.0, 1.0, 2.0]), np.array([3.0, 2.0, 0.0]))


def test_units():
    """Test the level and time scalings of one lattice step."""
    assert level_unit(0.02) == pytest.approx(0.01)
    assert time_unit(0.02) == pytest.approx(0.001)


def test_initial_population():
    """Test rounding of masses to lattice populations."""
    assert initial_population(0.0, SCALE) == 0
    assert initial_population(1e-6, SCALE) == 0
    assert initial_population(0.5, SCALE) == 32
    assert initial_population(0.5 + 1e-12, SCALE, path_stream(0, 0)) == 32


def test_initial_population_mean():
    """Test that random rounding keeps the mean population."""
    rng = path_stream(4, 0)
    draws = np.array([initial_population(2.6 * SCALE, SCALE, rng) for _ in range(20000)])
    assert set(np.unique(draws)) <= {2, 3}
    assert draws.mean() == pytest.approx(2.6, abs=4.0 * math.sqrt(0.24 / 20000))


def test_spindle_values(step_spindle):
    """Test right-continuous evaluation of a step spindle."""
    assert step_spindle.lifetime == 2.0
    assert step_spindle.value_at(-0.1) == 0.0
    assert step_spindle.value_at(0.5) == 3.0
    assert step_spindle.value_at(1.0) == 2.0
    assert step_spindle.value_at(2.0) == 0.0
    assert list(step_spindle.values_at(np.array([0.0, 1.5, 3.0]))) == [3.0, 2.0, 0.0]


def test_spindle_cut_and_scale(step_spindle):
    """Test cutting a spindle at a level and BESQ scaling."""
    cut = step_spindle.cut_below(1.5)
    assert cut.birth == 1.5
    assert cut.death == pytest.approx(2.0)
    assert cut.value_at(1.5) == 2.0
    assert step_spindle.cut_below(5.0).lifetime == 0.0
    scaled = step_spindle.scaled(2.0)
    assert scaled.lifetime == 4.0
    assert scaled.value_at(1.0) == 6.0


def test_spindle_from_live_besq_path_fails():
    """Test that only absorbed BESQ paths make spindles."""
    from skewer_lab.kernels import sample_besq_path

    path = sample_besq_path(1.0, 1.0, 1e-2, 0.5, path_stream(0, 0))
    with pytest.raises(ScaffoldingError):
        SpindlePath.from_besq(path)


def test_scaffolding_validation(step_spindle):
    """Test that times and spindles must line up and increase."""
    with pytest.raises(ScaffoldingError):
        MarkedScaffolding(np.array([0.0, 1.0]), (step_spindle,), SCALE, 1.0, 2.0)
    with pytest.raises(ScaffoldingError):
        MarkedScaffolding(np.array([1.0, 1.0]), (step_spindle, step_spindle), SCALE, 1.0, 2.0)


def test_empty_scaffolding():
    """Test the measure with no spindles."""
    empty = empty_scaffolding(SCALE)
    assert len(empty) == 0
    assert empty.max_level == 0.0
    assert len(skewer(0.1, empty)) == 0


def test_clade_starts_with_its_initial_mass():
    """Test that the skewer of a clade at level 0 is its initial block."""
    clade = sample_clade(0.5, SCALE, path_stream(1, 0))
    assert skewer(0.0, clade).masses == (0.5,)
    assert clade.path_at(0.0) == pytest.approx(clade.deaths[0])


def test_type1_measure_keeps_block_order():
    """Test that clades are concatenated in block order."""
    beta = IntervalPartition.from_masses([0.25, 0.5])
    measure = sample_type1_measure(beta, SCALE, path_stream(2, 0))
    assert measure.skewer(0.0).masses == (0.25, 0.5)


def test_total_mass_path_matches_skewer():
    """Test the vectorized total mass against the skewer at several levels."""
    measure = sample_clade(1.0, SCALE, path_stream(3, 0))
    levels = np.linspace(0.0, measure.max_level, 7)
    totals = total_mass_path(measure, levels)
    for y, total in zip(levels, totals):
        assert total == pytest.approx(measure.skewer(y).total_mass)


def test_concatenate_and_restrict():
    """Test splitting a concatenation back into its parts."""
    first = sample_clade(0.25, SCALE, path_stream(4, 0))
    second = sample_clade(0.25, SCALE, path_stream(4, 1))
    both = concatenate_measures([first, second])
    assert len(both) == len(first) + len(second)
    assert both.end_time == pytest.approx(first.end_time + second.end_time)
    tail = both.restrict(first.end_time)
    assert len(tail) == len(second)
    assert tail.skewer(0.0).masses == second.skewer(0.0).masses


def test_immigrants_are_born_below_depth():
    """Test the left immigrant measure."""
    left = sample_immigrants(0.5, SCALE, path_stream(5, 0))
    # descendants may rise above the depth; immigrant roots may not
    if len(left):
        assert left.births[0] < 0.5
        assert np.all(left.births >= 0.0)
    assert len(sample_immigrants(0.0, SCALE, path_stream(5, 0))) == 0


def test_clade_from_left_keeps_lower_immigrants():
    """Test that the clade keeps only immigrants born below the external spindle's death."""
    f = birth_death_spindle(0.25, SCALE, path_stream(6, 0))
    left = sample_immigrants(2.0 * f.death, SCALE, path_stream(6, 1))
    clade = clade_from_left(f, left)
    assert clade.spindles[0] is f
    assert clade.times[0] == 0.0
    if len(clade) > 1:
        assert clade.births[1] < f.death
        assert clade.times[1] > 0.0


def test_type1_data_star_skewer_at_zero():
    """Test that the starred measure starts from [f(0)] followed by beta."""
    data = sample_type1_data(
        0.25, IntervalPartition.from_masses([0.5]), SCALE, path_stream(7, 0)
    )
    assert data.f.initial == pytest.approx(0.25)
    assert data.star().skewer(0.0).masses == pytest.approx((0.25, 0.5))


def test_type0_data_depth_cutoff():
    """Test that type-0 skewers are refused beyond the generated depth."""
    data = Type0Data(empty_scaffolding(SCALE), empty_scaffolding(SCALE), 1.0)
    assert data.total_mass(0.5) == 0.0
    with pytest.raises(ScaffoldingError):
        data.skewer(1.5)


def test_birth_death_spindle_lattice_values():
    """Test that birth–death spindles take lattice values and die."""
    f = birth_death_spindle(0.25, SCALE, path_stream(8, 0), birth=0.1)
    assert f.birth == 0.1
    assert math.isfinite(f.death)
    assert np.allclose(f.values / SCALE, np.round(f.values / SCALE))


def test_prm_rates():
    """Test the truncated Lévy measure quantities."""
    z = 0.5
    assert arrival_rate(z) == pytest.approx(z**-1.5 / (math.pi * math.sqrt(2.0)))
    assert compensation_rate(z) == pytest.approx(3.0 * arrival_rate(z) * z)
    assert lifetime_tail(z, z) == 1.0
    assert lifetime_tail(2 * z, z) == pytest.approx(2.0**-1.5)
    assert np.all(sample_lifetimes(z, path_stream(9, 0), 100) >= z)


def test_reversed_besq_shape_has_requested_lifetime():
    """Test that the approximate spindle shape is rescaled to its lifetime."""
    shape = reversed_besq_shape(2.0, path_stream(10, 0))
    assert shape.lifetime == pytest.approx(2.0)
    assert shape.values[0] == 0.0
    assert shape.values[-1] == 0.0


def test_prm_truncated_mode():
    """Test the truncated PRM with a triangular shape sampler."""

    def triangle(life, rng):
        return SpindlePath(0.0, np.array([0.0, life]), np.array([1.0, 0.0]))

    z = 0.1
    measure = prm_truncated_mode(z, 5.0, path_stream(11, 0), shape_sampler=triangle)
    assert measure.end_time == 5.0
    assert np.all(np.diff(measure.times) > 0)
    lifetimes = measure.deaths - measure.births
    assert np.all(lifetimes >= z)
    assert measure.scale_unit is None
    assert measure.cutoff == z
    assert measure.restrict(1.0, 4.0).cutoff == z
    # each jump starts where the compensated scaffolding stands
    for i in range(1, len(measure)):
        expected = measure.deaths[i - 1] - measure.drift * (measure.times[i] - measure.times[i - 1])
        assert measure.births[i] == pytest.approx(expected)
    with pytest.raises(ScaffoldingError):
        prm_truncated_mode(0.0, 1.0, path_stream(11, 0))
    with pytest.raises(ScaffoldingError):
        prm_truncated_mode(z, -1.0, path_stream(11, 0))
