import json
import os
import subprocess

import pytest

CLI = os.environ.get("CANARD_CLI")
if not CLI or not os.path.exists(CLI):
    pytest.skip("CANARD_CLI not set", allow_module_level=True)


def run(*args, **kwargs):
    return subprocess.run([CLI, *args], capture_output=True, text=True,
                          **kwargs)


def write_config(tmp_path, circuit, params=None, epsilon=None):
    config = {"circuit": circuit, "params": params or {}}
    if epsilon is not None:
        config["epsilon"] = epsilon
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    return str(path)


def test_fit_values():
    result = run("fit", "--a", "-2", "--b", "4", "--d", "3")
    assert result.returncode == 0
    out = json.loads(result.stdout)
    assert abs(out["c1"] - 0.384088) < 1e-6
    assert abs(out["c2"] - (-0.962963)) < 1e-6

    flat = json.loads(run("fit", "--a", "1", "--b", "1", "--d", "2").stdout)
    assert flat["c1"] == 0.0
    assert flat["c2"] == 1.0


def test_fit_precondition_exit_code():
    result = run("fit", "--a", "-2", "--b", "4", "--d", "0.5")
    assert result.returncode == 2
    assert result.stderr.strip()


def test_analyze_verdicts(tmp_path):
    config = write_config(tmp_path, "chua3d_cubic", {"gamma": 0.3275})
    result = run("--config", config, "analyze")
    assert result.returncode == 0
    report = json.loads(result.stdout)
    assert report["schema"] == 1
    assert report["verdict"]["canard_exists"] is True

    below = json.loads(
        run("--config", config, "analyze", "--duck", "-0.5").stdout)
    assert below["verdict"]["canard_exists"] is False

    config4 = write_config(tmp_path, "chua4d_cubic", {"alpha2": 0.1})
    report4 = json.loads(run("--config", config4, "analyze").stdout)
    assert report4["verdict"]["canard_exists"] is True


def test_analyze_rejects_unknown_parameter(tmp_path):
    config = write_config(tmp_path, "chua3d_cubic", {"nope": 1.0})
    result = run("--config", config, "analyze")
    assert result.returncode == 2


def test_analyze_deterministic(tmp_path):
    config = write_config(tmp_path, "chua3d_cubic")
    first = run("--config", config, "analyze")
    second = run("--config", config, "analyze")
    assert first.stdout == second.stdout


def test_sweep_csv(tmp_path):
    config = write_config(tmp_path, "chua3d_cubic")
    result = run("--config", config, "sweep", "--parameter", "gamma",
                 "--min", "-0.5", "--max", "1", "--steps", "151")
    assert result.returncode == 0
    lines = result.stdout.strip().splitlines()
    assert lines[0] == "parameter,D1,D2,sigma2,stable-flag"
    assert len(lines) == 152

    # D2 changes sign near gamma ~ 0.274
    crossing = None
    prev = None
    for line in lines[1:]:
        gamma, _, d2 = (float(v) for v in line.split(",")[:3])
        if prev is not None and prev[1] * d2 < 0:
            crossing = 0.5 * (prev[0] + gamma)
        prev = (gamma, d2)
    assert crossing is not None
    assert abs(crossing - 0.274) < 0.02

    single = run("--config", config, "sweep", "--parameter", "gamma",
                 "--min", "0.2", "--max", "0.2", "--steps", "10")
    assert len(single.stdout.strip().splitlines()) == 2


def test_simulate_outputs(tmp_path):
    config = write_config(tmp_path, "chua3d_cubic", {"gamma": 0.3275})
    out_dir = tmp_path / "run"
    result = run("--config", config, "--out", str(out_dir), "simulate",
                 "--t-final", "100")
    assert result.returncode == 0
    report = json.loads(result.stdout)
    assert report["repelling_time"] >= 0.1
    for name in ("trajectory.csv", "manifold.csv", "markers.csv",
                 "canard.json"):
        assert (out_dir / name).exists()
    header = (out_dir / "trajectory.csv").read_text().splitlines()[0]
    assert header == "t,x1,x2,y1"

    # t_final = 0: mesh only, trajectory reduced to the initial sample
    empty_dir = tmp_path / "empty"
    result0 = run("--config", config, "--out", str(empty_dir), "simulate",
                  "--t-final", "0")
    assert result0.returncode == 0
    assert len((empty_dir / "trajectory.csv").read_text().splitlines()) == 2


def test_simulate_4d_projections(tmp_path):
    config = write_config(tmp_path, "chua4d_cubic")
    out_dir = tmp_path / "run4"
    result = run("--config", config, "--out", str(out_dir), "simulate",
                 "--t-final", "20")
    assert result.returncode == 0
    assert (out_dir / "projection_x1_x3_y1.csv").exists()
    assert (out_dir / "projection_x1_y1.csv").exists()
    header = (out_dir / "trajectory.csv").read_text().splitlines()[0]
    assert header == "t,x1,x2,x3,y1"


def test_region(tmp_path):
    c2 = -0.72357
    intercept = -2.0 * c2 / (2.0 * c2 + 3.0)
    result = run("region", "--c1", "0.393781", "--c2", repr(c2),
                 "--probe", "0,0.9", "--probe", "0,1.2",
                 "--probe", "0," + repr(intercept))
    assert result.returncode == 0
    out = json.loads(result.stdout)
    classes = [p["classification"] for p in out["probes"]]
    assert classes[0] == "inside"
    assert classes[1] == "outside"
    assert classes[2] == "boundary"

    bad = run("region", "--c1", "-1", "--c2", "-1")
    assert bad.returncode == 2
