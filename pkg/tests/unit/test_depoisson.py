"""Tests for the time change, the resampling 2-tree and the Wright-Fisher reference."""

import numpy as np
import pytest

from skewer_lab.depoisson import (
    DePoissonizationError,
    depoissonize,
    integrated_clock,
    intertwining_restart,
    project_3mass,
    resampling_2tree,
    sample_stationary_state,
    wf_reference,
)
from skewer_lab.kernels import path_stream
from skewer_lab.partitions import IntervalPartition
from skewer_lab.type2 import Type2State, type2_deletion_clocking

SCALE = 1.0 / 64


@pytest.fixture
def clocking_path():
    """Deletion-clocking path from (1/4, 1/4, [1/2])."""
    beta = IntervalPartition.from_masses([0.5])
    return type2_deletion_clocking(0.25, 0.25, beta, SCALE, path_stream(0, 0), dy=0.02)


def test_integrated_clock_constant_mass():
    """Test that a constant mass 2 runs the clock at rate 1/2."""
    levels = np.linspace(0.0, 1.0, 11)
    clock = integrated_clock(levels, np.full(11, 2.0))
    assert clock[0] == 0.0
    assert clock[-1] == pytest.approx(0.5)


def test_depoissonized_states_have_unit_mass(clocking_path):
    """Test normalization and the monotone level change."""
    path = depoissonize(clocking_path, du=0.01)
    assert path.u[0] == 0.0
    assert np.all(np.diff(path.rho) >= 0)
    for state in path.states:
        assert state.total_mass == pytest.approx(1.0)
    assert path.states[0].three_mass() == pytest.approx((0.25, 0.25, 0.5))
    y = 0.5 * float(path.level_grid[-1])
    assert path.rho_at(path.rho_inverse(y)) == pytest.approx(y)
    assert len(path.to_rows(3)) == len(path)


def test_depoissonize_horizon(clocking_path):
    """Test that horizon_u cuts the time grid."""
    path = depoissonize(clocking_path, du=0.01, horizon_u=0.05)
    assert path.u[-1] <= 0.05 + 1e-12


def test_depoissonize_absorption_time(clocking_path):
    """Test that the degeneration level is carried to the new time scale."""
    path = depoissonize(clocking_path, du=0.01)
    if clocking_path.degeneration_level < clocking_path.lifetime:
        assert path.absorption_time is not None
        assert path.rho_at(path.absorption_time) == pytest.approx(
            clocking_path.degeneration_level, abs=1e-9
        )


def test_depoissonize_rejects_bad_input(clocking_path):
    """Test argument validation."""
    with pytest.raises(DePoissonizationError):
        depoissonize(clocking_path, du=0.0)
    absorbed = type2_deletion_clocking(
        0.0, 0.0, IntervalPartition(), SCALE, path_stream(0, 0)
    )
    with pytest.raises(DePoissonizationError):
        depoissonize(absorbed)


def test_stationary_state_on_simplex():
    """Test that stationary draws have unit mass."""
    rng = path_stream(1, 0)
    for _ in range(20):
        state = sample_stationary_state(rng, 64)
        assert state.total_mass == pytest.approx(1.0)


def test_resampling_2tree():
    """Test that the 2-tree path stays on the simplex and flags its resampling times."""
    start = Type2State(0.5, 0.25, IntervalPartition.from_masses([0.25]))
    path = resampling_2tree(start, 0.5, 0.01, path_stream(2, 0), scale_unit=SCALE, n_approx=64)
    assert path.u[0] == 0.0
    assert np.all(np.diff(path.u) > 0)
    assert path.u[-1] <= 0.5 + 1e-12
    assert np.allclose(project_3mass(path).sum(axis=1), 1.0)
    assert int(path.jump_flags.sum()) == len([t for t in path.jump_times if t <= path.u[-1]])
    assert len(path.to_rows(0)) == len(path)


def test_resampling_needs_unit_mass():
    """Test that the 2-tree evolution starts from a unit-mass state."""
    with pytest.raises(DePoissonizationError):
        resampling_2tree(Type2State(0.5, 0.25), 1.0, 0.01, path_stream(0, 0))


def test_wf_reference():
    """Test the Wright-Fisher reference path on the simplex."""
    path = wf_reference((0.4, 0.3, 0.3), 0.01, 0.2, path_stream(3, 0), dt=1e-3)
    assert list(path.values[0]) == [0.4, 0.3, 0.3]
    assert np.allclose(path.values.sum(axis=1), 1.0)
    assert np.all(path.values >= 0)
    assert path.u[-1] <= min(0.2, path.killed_at) + 1e-12
    assert path.value_at(0.0) == pytest.approx([0.4, 0.3, 0.3])
    with pytest.raises(DePoissonizationError):
        path.value_at(path.u[-1] + 1.0)


@pytest.mark.parametrize("x0", [(0.5, 0.5), (0.0, 0.5, 0.5), (0.5, 0.4, 0.3)])
def test_wf_reference_needs_open_simplex(x0):
    """Test that the starting point must lie in the open 2-simplex."""
    with pytest.raises(DePoissonizationError):
        wf_reference(x0, 0.01, 1.0, path_stream(0, 0))


def test_intertwining_restart():
    """Test a restart with a fresh partition of the same mass."""
    state = Type2State(0.25, 0.25, IntervalPartition.from_masses([0.25, 0.25]))
    masses = intertwining_restart(state, 0.1, SCALE, path_stream(4, 0), n_approx=64)
    assert len(masses) == 3
    assert min(masses) >= 0.0
    assert intertwining_restart(Type2State(0.0, 0.0), 0.1, SCALE, path_stream(4, 0)) == (
        0.0,
        0.0,
        0.0,
    )
