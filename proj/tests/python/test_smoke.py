import cmath
import math
import os
from pathlib import Path

import numpy as np
import pytest

import polyprop

SCENARIOS = Path(os.environ.get("POLYPROP_SCENARIO_DIR", Path(__file__).resolve().parents[2] / "scenarios"))


def scenario(name):
    return polyprop.load_scenario(str(SCENARIOS / f"{name}.scn"))


def test_free_kernel_matches_closed_form():
    k = polyprop.free_kernel([0.0, 0.0], [1.0, 2.0], 0.5, mass=2.0, hbar=0.5)
    m, hbar, dt, r2 = 2.0, 0.5, 0.5, 5.0
    expected = (m / (2j * math.pi * hbar * dt)) * cmath.exp(1j * m * r2 / (2 * hbar * dt))
    assert abs(k - expected) <= 1e-13 * abs(expected)
    with pytest.raises(ValueError):
        polyprop.free_kernel([0.0], [1.0, 2.0], 1.0)


def test_scenario_round_trip_and_errors():
    s = scenario("double_slit")
    assert s.n_walls == 3
    assert len(s.corners) == 4
    assert polyprop.parse_scenario(s.emit()) == s
    with pytest.raises(polyprop.ValidationError):
        polyprop.parse_scenario("[constants]\ntime = -1\n")


def test_paths_have_times_summing_to_T():
    s = scenario("double_slit")
    paths = polyprop.enumerate_paths(s, s.bin_center(s.n_bins // 3), max_corners=1)
    assert len(paths) == 4
    for p in paths:
        assert len(p["corner_ids"]) == 1
        assert sum(p["segment_times"]) == pytest.approx(s.time, rel=1e-14)


def test_polygon_profile_is_symmetric_and_normalized():
    p = polyprop.polygon_profile(scenario("double_slit"))
    y = p["intensity"]
    assert y.max() == pytest.approx(1.0)
    assert np.allclose(y, y[::-1], atol=1e-10)
    assert p["shadow"].dtype == bool


def test_oracle_and_compare_on_a_coarse_lattice():
    s = scenario("single_slit").with_options(grid=128, slices=8, bins=65)
    oracle = polyprop.oracle_profile(s)
    assert oracle["intensity"].shape == (65,)
    assert np.isfinite(oracle["intensity"]).all()
    same = polyprop.compare(oracle, oracle)
    assert same["correlation"] == pytest.approx(1.0)
    assert same["max_maxima_offset"] == 0.0


def test_simulate_splits_at_a_corner():
    s = scenario("corner_demo").with_options(fan=6)
    trajectories, truncated = polyprop.simulate(s)
    assert not truncated
    assert len(trajectories) == 6
    assert all(t["points"][0][3] == "start" for t in trajectories)


def test_run_writes_artifacts(tmp_path):
    s = scenario("single_slit").with_options(bins=33, out=str(tmp_path))
    result = polyprop.run("intensity", s, "single_slit")
    assert result["artifacts"]
    assert (tmp_path / "intensity.csv").exists()
