import json
import os
import subprocess
import sys

import pytest

from specinv.errors import ConfigError, UnknownSeries
from specinv.report import body_bytes, emit_csv, find_series
from specinv.suites import SuiteConfig, run_config


def run_cli(args, cwd):
    return subprocess.run([sys.executable, "-m", "specinv.cli"] + args,
                          capture_output=True, text=True, cwd=cwd)


def test_config_validation():
    with pytest.raises(ConfigError):
        SuiteConfig.from_dict({"zeed": 1})
    with pytest.raises(ConfigError):
        SuiteConfig.from_dict({"grid": {"spacing": 0.1}})
    with pytest.raises(ConfigError):
        SuiteConfig.from_dict({"suite": "nope"})
    with pytest.raises(ConfigError):
        SuiteConfig.from_dict({"trials": -3})
    cfg = SuiteConfig.from_dict({"suite": "penrose", "seed": 9,
                                 "grid": {"h": 0.1}, "tolerances": {"x": 1e-5}})
    assert cfg.h == 0.1 and cfg.seed == 9


def test_run_config_deterministic_body():
    cfg = SuiteConfig.from_dict({"suite": "penrose", "seed": 11})
    r1 = run_config(cfg)
    r2 = run_config(cfg)
    assert body_bytes(r1) == body_bytes(r2)
    # a different seed changes measured values somewhere
    r3 = run_config(SuiteConfig.from_dict({"suite": "penrose", "seed": 12}))
    assert body_bytes(r1) != body_bytes(r3)


def test_tolerance_override_forces_failure():
    cfg = SuiteConfig.from_dict({"suite": "fcalc", "seed": 11,
                                 "tolerances": {"fcalc.winding_residual": 1e-30}})
    report = run_config(cfg)
    assert report["failures"] >= 1


def test_cli_run_exit_codes_and_determinism(tmp_path):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"suite": "penrose", "seed": 42}))
    out1 = run_cli(["run", "--config", str(config), "--out", str(tmp_path / "r1.json")],
                   cwd=tmp_path)
    assert out1.returncode == 0
    out2 = run_cli(["run", "--config", str(config), "--out", str(tmp_path / "r2.json")],
                   cwd=tmp_path)
    assert out2.returncode == 0
    assert out1.stdout == out2.stdout and len(out1.stdout) > 100
    report = json.loads((tmp_path / "r1.json").read_text())
    assert report["failures"] == 0
    assert all("anchor" in rec for rec in report["records"])


def test_cli_malformed_config_exits_2(tmp_path):
    config = tmp_path / "bad.json"
    config.write_text(json.dumps({"suite": "penrose", "zeed": 1}))
    out = run_cli(["run", "--config", str(config)], cwd=tmp_path)
    assert out.returncode == 2
    assert "zeed" in out.stderr
    config.write_text("{not json")
    out = run_cli(["run", "--config", str(config)], cwd=tmp_path)
    assert out.returncode == 2


def test_cli_check_failure_exits_1(tmp_path):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"suite": "fcalc", "seed": 3,
                                  "tolerances": {"fcalc.winding_residual": 1e-30}}))
    out = run_cli(["run", "--config", str(config), "--out", str(tmp_path / "r.json")],
                  cwd=tmp_path)
    assert out.returncode == 1


def test_csv_and_series(tmp_path):
    cfg = SuiteConfig.from_dict({"suite": "groupoid", "seed": 4})
    report = run_config(cfg)
    growth = find_series(report, "growth_sweep")
    assert growth["columns"] == ["r", "measure", "bound"]
    out = tmp_path / "sweep.csv"
    emit_csv(report, "growth_sweep", str(out))
    text = out.read_text()
    assert text.startswith("r,measure,bound\n")
    assert text.endswith("\n")
    assert len(text.splitlines()) == len(growth["rows"]) + 1
    with pytest.raises(UnknownSeries):
        emit_csv(report, "missing", str(out))


def test_render_writes_csv_and_figures(tmp_path):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"suite": "groupoid", "seed": 4}))
    out = run_cli(["run", "--config", str(config), "--out", str(tmp_path / "r.json"),
                   "--render", str(tmp_path / "artifacts")], cwd=tmp_path)
    assert out.returncode == 0
    files = sorted(os.listdir(tmp_path / "artifacts"))
    assert "growth_sweep.csv" in files and "growth_sweep.png" in files


def test_cli_plot_subcommand(tmp_path):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"suite": "groupoid", "seed": 4}))
    run_cli(["run", "--config", str(config), "--out", str(tmp_path / "r.json")],
            cwd=tmp_path)
    out = run_cli(["plot", "--report", str(tmp_path / "r.json"),
                   "--outdir", str(tmp_path / "figs")], cwd=tmp_path)
    assert out.returncode == 0
    assert any(name.endswith(".png") for name in os.listdir(tmp_path / "figs"))


def test_threads_env_validation(tmp_path):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"suite": "penrose", "seed": 42}))
    env = dict(os.environ, SPECINV_THREADS="2")
    out = subprocess.run([sys.executable, "-m", "specinv.cli", "run", "--config",
                          str(config), "--out", str(tmp_path / "r.json")],
                         capture_output=True, text=True, cwd=tmp_path, env=env)
    assert out.returncode == 0
    report = json.loads((tmp_path / "r.json").read_text())
    assert report["config"]["threads"] == 2
    env["SPECINV_THREADS"] = "zero"
    out = subprocess.run([sys.executable, "-m", "specinv.cli", "run", "--config",
                          str(config)], capture_output=True, text=True,
                         cwd=tmp_path, env=env)
    assert out.returncode == 2
