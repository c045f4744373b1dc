"""End-to-end behavior of the corereach command line tool."""

import json
import os
import subprocess

import pytest

CLI = os.environ.get("COREREACH_CLI")
SEC6 = os.environ.get("COREREACH_SEC6", "configs/sec6.json")

pytestmark = pytest.mark.skipif(
    CLI is None or not os.path.exists(CLI), reason="COREREACH_CLI not set"
)


def run_cli(*args, env=None):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run(
        [CLI, *args], capture_output=True, text=True, env=full_env, timeout=120
    )


def sec6_config():
    with open(SEC6) as f:
        return json.load(f)


def write_config(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_validate_ok():
    result = run_cli("validate", "-c", SEC6)
    assert result.returncode == 0
    assert "smallest certified Q = 2" in result.stdout
    assert "gamma = 0.5" in result.stdout
    assert result.stdout.count("[PASS]") == 6


def test_validate_empty_core(tmp_path):
    doc = sec6_config()
    doc["game"] = {"n_agents": 2, "values": {"1": 1.0, "2": 1.0, "1,2": 1.0}}
    doc["graphs"] = {
        "matrices": [[0.5, 0.5, 0.5, 0.5]],
        "schedule": {"type": "periodic", "order": [0]},
    }
    result = run_cli("validate", "-c", write_config(tmp_path, doc))
    assert result.returncode == 2
    assert "[FAIL] core_nonempty" in result.stdout


def test_validate_bad_alpha(tmp_path):
    doc = sec6_config()
    doc["steps"] = {"kind": "fixed", "alpha": 1.5}
    result = run_cli("validate", "-c", write_config(tmp_path, doc))
    assert result.returncode == 2
    assert "[FAIL] step_schedule" in result.stdout


def test_parse_error(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{ not json")
    result = run_cli("validate", "-c", str(path))
    assert result.returncode == 4


def test_run_converges(tmp_path):
    out = tmp_path / "out"
    result = run_cli("run", "-c", SEC6, "-o", str(out))
    assert result.returncode == 0
    csv = (out / "sec6.csv").read_text()
    assert csv.startswith("k,dist,normalized_dist,consensus_residual,block_sum_gap\n")
    summary = json.loads((out / "sec6_summary.json").read_text())
    assert summary["converged"] is True
    assert summary["final_k"] <= 1000
    allocation = summary["final_allocation"]
    assert max(abs(a - b) for a, b in zip(allocation, [4.0, 3.0, 0.0, 3.0])) < 1e-5


def test_run_nonconvergence_exit(tmp_path):
    doc = sec6_config()
    doc["max_iters"] = 1
    path = write_config(tmp_path, doc, "short.json")
    out = tmp_path / "out"
    result = run_cli("run", "-c", path, "-o", str(out))
    assert result.returncode == 3
    rows = (out / "short.csv").read_text().strip().splitlines()
    assert len(rows) == 3  # header + k=0 + k=1
    summary = json.loads((out / "short_summary.json").read_text())
    assert summary["converged"] is False


def test_run_converged_at_start(tmp_path):
    doc = sec6_config()
    stable = [4.0, 3.0, 0.0, 3.0]
    doc["initial"] = {"type": "explicit", "blocks": [stable] * 4}
    path = write_config(tmp_path, doc, "stable.json")
    out = tmp_path / "out"
    result = run_cli("run", "-c", path, "-o", str(out))
    assert result.returncode == 0
    summary = json.loads((out / "stable_summary.json").read_text())
    assert summary["final_k"] == 0
    assert summary["final_dist"] == 0.0


def test_run_power_steps(tmp_path):
    doc = sec6_config()
    doc["steps"] = {"kind": "power", "c": 1.0, "p": 0.75}
    path = write_config(tmp_path, doc, "power.json")
    out = tmp_path / "out"
    result = run_cli("run", "-c", path, "-o", str(out))
    assert result.returncode == 0
    summary = json.loads((out / "power_summary.json").read_text())
    assert summary["converged"] is True


def test_validate_bad_power_exponent(tmp_path):
    doc = sec6_config()
    doc["steps"] = {"kind": "power", "c": 1.0, "p": 0.5}
    result = run_cli("validate", "-c", write_config(tmp_path, doc))
    assert result.returncode == 2
    assert "[FAIL] step_schedule" in result.stdout


def test_run_deterministic(tmp_path):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    assert run_cli("run", "-c", SEC6, "-o", str(out_a)).returncode == 0
    assert run_cli("run", "-c", SEC6, "-o", str(out_b)).returncode == 0
    assert (out_a / "sec6.csv").read_bytes() == (out_b / "sec6.csv").read_bytes()


def test_output_dir_from_env(tmp_path):
    out = tmp_path / "env_out"
    result = run_cli("run", "-c", SEC6, env={"COREREACH_OUT": str(out)})
    assert result.returncode == 0
    assert (out / "sec6.csv").exists()


def test_sweep_beta(tmp_path):
    out = tmp_path / "out"
    result = run_cli(
        "sweep", "-c", SEC6, "--param", "beta", "--values", "0.2,0.8",
        "--threshold", "1e-6", "-o", str(out),
    )
    assert result.returncode == 0
    summary = (out / "sec6_sweep_summary.csv").read_text().strip().splitlines()
    assert len(summary) == 3
    fast = dict(zip(summary[0].split(","), summary[2].split(",")))
    slow = dict(zip(summary[0].split(","), summary[1].split(",")))
    assert int(fast["iterations_to_threshold"]) < int(slow["iterations_to_threshold"])
    assert (out / "sec6_beta_0.2.csv").exists()
    assert (out / "sec6_beta_0.8.csv").exists()


def test_sweep_alpha_with_harmonic(tmp_path):
    out = tmp_path / "out"
    result = run_cli(
        "sweep", "-c", SEC6, "--param", "alpha", "--values", "0.5,harmonic",
        "--threshold", "1e-4", "-o", str(out),
    )
    assert result.returncode == 0
    lines = (out / "sec6_sweep_summary.csv").read_text().strip().splitlines()
    header = lines[0].split(",")
    fixed = dict(zip(header, lines[1].split(",")))
    harmonic = dict(zip(header, lines[2].split(",")))
    assert int(fixed["iterations_to_threshold"]) < int(harmonic["iterations_to_threshold"])


def test_sweep_rejects_inadmissible_values(tmp_path):
    result = run_cli(
        "sweep", "-c", SEC6, "--param", "beta", "--values", "0.2,1.5",
        "-o", str(tmp_path),
    )
    assert result.returncode == 2
    assert not list(tmp_path.glob("*.csv"))  # rejected before any run


def test_sweep_single_value_matches_run(tmp_path):
    out_run = tmp_path / "run"
    out_sweep = tmp_path / "sweep"
    assert run_cli("run", "-c", SEC6, "-o", str(out_run)).returncode == 0
    assert (
        run_cli(
            "sweep", "-c", SEC6, "--param", "beta", "--values", "0.8",
            "-o", str(out_sweep),
        ).returncode
        == 0
    )
    run_csv = (out_run / "sec6.csv").read_bytes()
    sweep_csv = (out_sweep / "sec6_beta_0.8.csv").read_bytes()
    assert run_csv == sweep_csv


def test_oracle_deterministic():
    a = run_cli("oracle", "--seed", "7", "--trials", "50")
    b = run_cli("oracle", "--seed", "7", "--trials", "50")
    assert a.returncode == 0
    assert a.stdout == b.stdout
    assert a.stdout.count("[PASS]") == 4


def test_oracle_rejects_zero_trials():
    assert run_cli("oracle", "--trials", "0").returncode == 2
