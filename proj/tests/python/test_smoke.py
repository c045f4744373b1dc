"""Smoke tests for the python extension."""

import json
import math
import os

import pytest

corereach = pytest.importorskip("corereach")

DEMO_VALUES = {
    "1": 4.0, "2": 3.0, "3": 0.0, "4": 3.0,
    "1,2": 5.0, "3,4": 3.0, "1,2,3": 7.0, "1,2,3,4": 10.0,
}


def demo_game():
    return corereach.Game(4, DEMO_VALUES)


def sec6_config_text():
    path = os.environ.get("COREREACH_SEC6", "configs/sec6.json")
    with open(path) as f:
        return f.read()


def test_game_basics():
    game = demo_game()
    assert game.n_agents == 4
    assert game.grand_value == 10.0
    assert game.value([1]) == 4.0
    assert game.value([1, 3]) == 0.0  # unlisted coalition
    assert game.core_nonempty()
    assert game.core_membership([4.0, 3.0, 0.0, 3.0])
    assert not game.core_membership([10.0, 0.0, 0.0, 0.0])


def test_projection_surface():
    core = corereach.core_polyhedron(demo_game())
    assert core.dim == 4
    assert core.n_eq == 1
    assert core.n_ineq == 14

    member = [4.0, 3.0, 0.0, 3.0]
    assert list(core.project(member)) == member
    assert core.distance(member) == 0.0

    far = [10.0, 0.0, 0.0, 0.0]
    proj = core.project(far)
    assert max(abs(a - b) for a, b in zip(proj, member)) < 1e-8
    oracle = core.project_oracle(far)
    assert max(abs(a - b) for a, b in zip(proj, oracle)) < 1e-8
    assert abs(core.distance(far) - math.sqrt(54.0)) < 1e-10

    relaxed = core.apply_t(0.8, far)
    expected = [-0.8, 5.4, 0.0, 5.4]
    assert max(abs(a - b) for a, b in zip(relaxed, expected)) < 1e-8


def test_empty_set_error():
    game = corereach.Game(2, {"1": 1.0, "2": 1.0, "1,2": 1.0})
    assert not game.core_nonempty()
    core = corereach.core_polyhedron(game)
    with pytest.raises(corereach.EmptySetError):
        core.project([0.5, 0.5])


def test_run_experiment():
    result = corereach.run_experiment(sec6_config_text())
    assert result["converged"]
    assert result["final_k"] <= 1000
    allocation = result["final_allocation"]
    assert max(abs(a - b) for a, b in zip(allocation, [4.0, 3.0, 0.0, 3.0])) < 1e-5
    trajectory = result["trajectory"]
    assert trajectory["normalized_dist"][0] == 1.0
    assert trajectory["dist"][-1] <= 1e-6
    assert result["metric_monotone"]


def test_validate_config():
    report = corereach.validate_config(sec6_config_text())
    assert report["all_pass"]
    assert report["smallest_q"] == 2
    assert report["gamma"] == 0.5

    bad = json.loads(sec6_config_text())
    bad["steps"]["alpha"] = 1.5
    report = corereach.validate_config(json.dumps(bad))
    assert not report["all_pass"]
    assert not report["gates"]["step_schedule"]["pass"]


def test_config_error():
    with pytest.raises(corereach.ConfigError):
        corereach.validate_config("{}")
