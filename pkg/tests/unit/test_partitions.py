"""Tests for interval partitions, diversity annotations and the d_I metric."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skewer_lab.partitions import (
    EMPTY,
    Correspondence,
    IntervalPartition,
    PartitionError,
    annotate_diversity,
    brute_force_distance,
    concatenate,
    concatenate_all,
    dip_distance,
    distortion,
    diversity_estimate,
    enumerate_correspondences,
    scale,
)


@st.composite
def partitions(draw, max_blocks: int = 5):
    """Annotated partitions with small block counts."""
    masses = draw(
        st.lists(st.floats(min_value=0.01, max_value=3.0), min_size=0, max_size=max_blocks)
    )
    steps = draw(
        st.lists(
            st.floats(min_value=0.0, max_value=2.0), min_size=len(masses), max_size=len(masses)
        )
    )
    div_left, total = [], 0.0
    for step in steps:
        total += step
        div_left.append(total)
    total += draw(st.floats(min_value=0.0, max_value=2.0))
    return IntervalPartition(tuple(masses), tuple(div_left), total)


def test_rejects_nonpositive_masses():
    """Test that zero, negative and infinite masses are rejected."""
    for bad in (0.0, -1.0, math.inf):
        with pytest.raises(PartitionError):
            IntervalPartition((1.0, bad))


def test_rejects_decreasing_diversity():
    """Test that diversity annotations must be nondecreasing and fit the total."""
    with pytest.raises(PartitionError):
        IntervalPartition((1.0, 1.0), (0.5, 0.2), 1.0)
    with pytest.raises(PartitionError):
        IntervalPartition((1.0, 1.0), (0.0, 0.5), 0.4)
    with pytest.raises(PartitionError):
        IntervalPartition((1.0,), (0.0, 0.5), 1.0)


def test_from_masses_drops_zero_blocks():
    """Test building a partition from raw masses."""
    beta = IntervalPartition.from_masses([0.5, 0.0, 0.25])
    assert beta.masses == (0.5, 0.25)
    assert not beta.annotated
    assert beta.total_mass == pytest.approx(0.75)
    assert beta.diversity == 0.0


def test_left_endpoints_and_tail():
    """Test prefix sums and re-based tails."""
    beta = IntervalPartition((1.0, 2.0, 3.0), (0.0, 0.5, 1.5), 2.0)
    assert list(beta.left_endpoints()) == [0.0, 1.0, 3.0]
    tail = beta.tail(1)
    assert tail.masses == (2.0, 3.0)
    assert tail.div_left == (0.0, 1.0)
    assert tail.total_diversity == pytest.approx(1.5)
    assert len(beta.tail(5)) == 0


def test_diversity_estimate_counts_large_blocks():
    """Test the block-counting diversity estimator."""
    beta = IntervalPartition((0.5, 0.01, 0.2, 0.3))
    h = 0.1
    assert diversity_estimate(beta, h) == pytest.approx(3 * math.sqrt(math.pi * h))
    assert diversity_estimate(beta, h, t=2) == pytest.approx(math.sqrt(math.pi * h))
    with pytest.raises(PartitionError):
        diversity_estimate(beta, 0.0)


def test_annotate_diversity_matches_estimator():
    """Test that annotations agree with the estimator at every block."""
    beta = IntervalPartition((0.5, 0.01, 0.2, 0.3))
    annotated = annotate_diversity(beta, 0.1)
    for t in range(len(beta)):
        assert annotated.div_left[t] == pytest.approx(diversity_estimate(beta, 0.1, t))
    assert annotated.diversity == pytest.approx(diversity_estimate(beta, 0.1))


def test_concatenate_shifts_diversity():
    """Test that the right-hand diversities are shifted by the left total."""
    left = IntervalPartition((1.0,), (0.0,), 0.7)
    right = IntervalPartition((2.0, 3.0), (0.1, 0.4), 0.5)
    both = concatenate(left, right)
    assert both.masses == (1.0, 2.0, 3.0)
    assert both.div_left == pytest.approx((0.0, 0.8, 1.1))
    assert both.diversity == pytest.approx(1.2)
    assert concatenate_all([left, EMPTY, right]) == both


def test_scale_uses_square_root_for_diversity():
    """Test mass scaling by c and diversity scaling by sqrt(c)."""
    beta = IntervalPartition((1.0, 2.0), (0.0, 1.0), 2.0)
    scaled = scale(4.0, beta)
    assert scaled.masses == (4.0, 8.0)
    assert scaled.div_left == (0.0, 2.0)
    assert scaled.diversity == pytest.approx(4.0)
    with pytest.raises(PartitionError):
        scale(0.0, beta)


def test_correspondence_must_increase():
    """Test that correspondences are order preserving."""
    with pytest.raises(PartitionError):
        Correspondence(((0, 1), (1, 0)))


def test_enumerate_correspondences_count():
    """Test the number of correspondences between 2 and 3 blocks."""
    # sum over sizes s of C(2, s) C(3, s) = 1 + 6 + 3
    assert len(list(enumerate_correspondences(2, 3))) == 10


def test_distance_to_empty_is_mass_or_diversity():
    """Test the distance from a partition to the empty partition."""
    beta = IntervalPartition((0.5, 0.25), (0.0, 0.1), 2.0)
    assert dip_distance(beta, EMPTY).value == pytest.approx(2.0)
    beta = IntervalPartition((0.5, 0.25), (0.0, 0.1), 0.3)
    assert dip_distance(beta, EMPTY).value == pytest.approx(0.75)


def test_distance_hand_computed():
    """Test a distance computed by hand."""
    beta = IntervalPartition((1.0, 0.2))
    gamma = IntervalPartition((0.9,))
    # matching the large blocks leaves 0.1 + 0.2 on the first side
    result = dip_distance(beta, gamma)
    assert result.value == pytest.approx(0.3)
    assert result.correspondence.pairs == ((0, 0),)
    assert result.exact


def test_distortion_rejects_out_of_range_pairs():
    """Test that distortion validates pair indices."""
    beta = IntervalPartition((1.0,))
    with pytest.raises(PartitionError):
        distortion(beta, beta, Correspondence(((0, 1),)))


def test_greedy_bound_above_threshold():
    """Test that large partitions fall back to the greedy upper bound."""
    beta = IntervalPartition(tuple(0.1 * (i + 1) for i in range(6)))
    gamma = IntervalPartition(tuple(0.1 * (6 - i) for i in range(6)))
    bound = dip_distance(beta, gamma, exact_threshold=3)
    exact = dip_distance(beta, gamma)
    assert not bound.exact
    assert bound.value >= exact.value - 1e-12


@settings(max_examples=60, deadline=None)
@given(partitions(), partitions())
def test_exact_distance_matches_brute_force(beta, gamma):
    """Test the dynamic program against exhaustive enumeration."""
    assert dip_distance(beta, gamma).value == pytest.approx(
        brute_force_distance(beta, gamma).value, abs=1e-9
    )


@settings(max_examples=60, deadline=None)
@given(partitions(), partitions())
def test_distance_is_symmetric(beta, gamma):
    """Test d(beta, gamma) == d(gamma, beta)."""
    assert dip_distance(beta, gamma).value == pytest.approx(
        dip_distance(gamma, beta).value, abs=1e-9
    )


@settings(max_examples=40, deadline=None)
@given(partitions(4), partitions(4), partitions(4))
def test_triangle_inequality(a, b, c):
    """Test d(a, c) <= d(a, b) + d(b, c)."""
    ab = dip_distance(a, b).value
    bc = dip_distance(b, c).value
    assert dip_distance(a, c).value <= ab + bc + 1e-9


@settings(max_examples=40, deadline=None)
@given(partitions())
def test_distance_to_self_is_zero(beta):
    """Test d(beta, beta) == 0."""
    assert dip_distance(beta, beta).value == pytest.approx(0.0, abs=1e-12)
