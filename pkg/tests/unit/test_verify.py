"""Tests for the verification battery registry, runner and process pool."""

import math

import numpy as np
import pytest

from skewer_lab.kernels import DISCRETIZATION_ALLOWANCE, path_stream
from skewer_lab.type2 import surviving_rate
from skewer_lab.verify import (
    Outcome,
    UnknownTestError,
    VerificationError,
    battery_names,
    get_test,
    map_paths,
    run_all,
    run_test,
)
from skewer_lab.verify import registry
from skewer_lab.verify.registry import (
    float_list,
    largest_increase,
    loosened,
    normalized_ks,
    param,
)
from skewer_lab.verify.type2_checks import DEGENERATION_WINDOW, degeneration_mass_distance


def _uniform(rng, params):
    return float(rng.random()) * params["scale"]


@pytest.fixture
def scratch_battery(monkeypatch):
    """Isolate registrations made by a test."""
    monkeypatch.setattr(registry, "BATTERY", dict(registry.BATTERY))
    return registry


def test_battery_has_every_group():
    """Test that importing the package registers the full battery."""
    names = set(battery_names())
    for name in (
        "d_metric_oracle",
        "aldous_stationary",
        "clock_level_exact",
        "type1_total_mass",
        "degeneration_prob",
        "total_mass_alternating",
        "total_mass_clocking",
        "total_mass_interweaving",
        "initial_mass",
        "clade_scaling",
        "resampling_stationarity",
        "wf_killed_agreement",
    ):
        assert name in names
    assert battery_names() == sorted(names)


def test_unknown_test():
    """Test that looking up an unregistered name fails with the known names."""
    with pytest.raises(UnknownTestError) as excinfo:
        get_test("no_such_test")
    assert "d_metric_oracle" in str(excinfo.value)


def test_register_rejects_duplicates(scratch_battery):
    """Test that a name can only be registered once."""

    @scratch_battery.register("scratch_check", "always passes", default_paths=3)
    def scratch_check(n_paths, seed, params):
        return Outcome(0.0, 0.0, 0.0, "constant", n_paths)

    assert get_test("scratch_check").default_paths == 3
    with pytest.raises(VerificationError):
        scratch_battery.register("scratch_check", "again")(scratch_check)


def test_run_test_pass_and_fail(scratch_battery):
    """Test the pass rule |statistic - reference| <= tolerance, with NaN failing."""

    @scratch_battery.register("scratch_close", "within tolerance")
    def scratch_close(n_paths, seed, params):
        return Outcome(1.05, 1.0, 0.1, "constant", n_paths, {"extra": 2})

    @scratch_battery.register("scratch_nan", "undefined statistic")
    def scratch_nan(n_paths, seed, params):
        return Outcome(math.nan, 0.0, 1.0, "constant", 0)

    report = run_test("scratch_close", n_paths=5, seed=9)
    assert report.passed
    assert report.n_paths == 5
    assert report.seed == 9
    assert report.details == {"extra": 2.0}
    assert report.runtime_seconds >= 0
    assert not run_test("scratch_nan", n_paths=1).passed


def test_run_test_default_paths(scratch_battery):
    """Test that the registered default is used when n_paths is not given."""
    seen = []

    @scratch_battery.register("scratch_default", "records n_paths", default_paths=11)
    def scratch_default(n_paths, seed, params):
        seen.append(n_paths)
        return Outcome(0.0, 0.0, 0.0, "constant", n_paths)

    run_test("scratch_default")
    assert seen == [11]
    with pytest.raises(VerificationError):
        run_test("scratch_default", n_paths=-1)


def test_param_helpers():
    """Test parameter conversion helpers."""
    assert param({}, "max_blocks", 6, int) == 6
    assert param({"max_blocks": "4"}, "max_blocks", 6, int) == 4
    assert param({"y": None}, "y", 0.5) == 0.5
    with pytest.raises(VerificationError):
        param({"y": "high"}, "y", 0.5)
    assert float_list("0.25, 0.5") == [0.25, 0.5]
    assert float_list((1, 2)) == [1.0, 2.0]
    assert float_list(1) == [1.0]


def test_ks_helpers():
    """Test the normalized KS statistic and the loosened threshold."""
    assert normalized_ks([(0.01, 0.02), (0.03, 0.02)]) == pytest.approx(1.5)
    assert math.isnan(normalized_ks([]))
    assert loosened(1.0) == DISCRETIZATION_ALLOWANCE


def test_largest_increase():
    """Test the largest rise over an ordered sequence of distances."""
    assert largest_increase([0.3, 0.2, 0.1]) == 0.0
    assert largest_increase([0.3, 0.35, 0.1, 0.3]) == pytest.approx(0.2)
    assert largest_increase([0.1]) == 0.0
    assert largest_increase([]) == 0.0


def test_degeneration_mass_window():
    """Test that only degenerations inside the window enter the mass statistic."""
    rng = path_stream(2, 0)
    n = 4000
    levels = rng.uniform(0.0, 1.0, n)
    masses = rng.gamma(0.5, 1.0 / surviving_rate(levels, 1.0))
    lo, hi = DEGENERATION_WINDOW
    inside = (levels >= lo) & (levels <= hi)
    masses[~inside] *= 3.0
    samples = np.column_stack([levels, np.ones(n), masses])
    near, n_near = degeneration_mass_distance(samples, DEGENERATION_WINDOW, 1.0)
    full, n_full = degeneration_mass_distance(samples, (0.0, math.inf), 1.0)
    assert n_near == int(inside.sum())
    assert n_full == n
    assert near < full / 2.0
    samples[:, 1] = 0.0
    samples[0, 1] = 1.0
    samples[0, 0] = 0.5
    assert degeneration_mass_distance(samples, DEGENERATION_WINDOW, 1.0)[1] == 1


def test_map_paths_order_independent_of_workers():
    """Test that results do not depend on the number of workers."""
    params = {"scale": 2.0}
    serial = map_paths(_uniform, 40, 5, params, workers=1)
    parallel = map_paths(_uniform, 40, 5, params, workers=2)
    assert len(serial) == 40
    assert serial == parallel
    assert map_paths(_uniform, 0, 5, params, workers=1) == []


@pytest.mark.parametrize(
    "name,n_paths,params",
    [
        ("d_metric_oracle", 20, {"max_blocks": 4}),
        ("d_metric_axioms", 20, {"max_blocks": 4}),
        ("aldous_stationary", 1, {}),
        ("two_tree_lumpability", 1, {"max_leaves": 4}),
        ("skewer_crp_consistency", 5, {}),
    ],
)
def test_exact_battery_entries_pass(single_worker, name, n_paths, params):
    """Test the battery entries whose answers are exact."""
    report = run_test(name, n_paths=n_paths, seed=1, params=params)
    assert report.passed
    assert report.statistic == 0.0


def test_run_all_with_names(single_worker):
    """Test running a named subset of the battery."""
    names = ["aldous_stationary", "two_tree_lumpability"]
    reports = run_all(n_paths=1, params={"max_leaves": 4}, names=names)
    assert [r.test_name for r in reports] == names


def test_clade_scaling_records_both_types(single_worker):
    """Test that scale-unit distances are kept in order for BESQ(0) and BESQ(1)."""
    params = {"scale_units": "0.03125,0.0625", "x": 0.25, "y": 0.1, "band": 10.0}
    report = run_test("clade_scaling", n_paths=20, seed=3, params=params)
    for label in ("type1", "type0"):
        assert f"ks_{label}_0.0625" in report.details
        assert f"ks_{label}_0.03125" in report.details
        first = report.details[f"ks_{label}_0.0625"]
        second = report.details[f"ks_{label}_0.03125"]
        assert report.details[f"rise_{label}"] == pytest.approx(max(0.0, second - first))


def test_initial_mass_reference(single_worker):
    """Test that lattice starts are compared with the unquantized mean 3 / (2 gamma)."""
    params = {"gamma": 2.0, "scale_unit": 1.0 / 64, "n_approx": 64}
    report = run_test("initial_mass", n_paths=6, seed=2, params=params)
    assert report.reference == pytest.approx(0.75)
    assert set(report.details) == {"mean_alternating", "mean_clocking", "mean_interweaving"}
    assert report.statistic in report.details.values()


def test_total_mass_reference_starts_unquantized(single_worker):
    """Test the provenance of the BESQ(-1) reference for total masses."""
    params = {"scale_unit": 1.0 / 64, "n_approx": 64}
    report = run_test("total_mass_clocking", n_paths=6, seed=2, params=params)
    assert report.provenance == "BESQ(-1) from Gamma(3/2, gamma)"
