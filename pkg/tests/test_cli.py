import json
from pathlib import Path

import numpy as np
import pytest

from osgreen.cli import build_parser, main
from osgreen.io import read_csv, roundtrip_csv

DEFAULT_CFG = str(Path(__file__).parents[1] / "configs" / "default.cfg")


def _run(*argv):
    return main([str(a) for a in argv])


def test_jobs_default_from_environment(monkeypatch):
    monkeypatch.setenv("OSGREEN_JOBS", "3")
    assert build_parser().parse_args(["tables"]).jobs == 3
    assert build_parser().parse_args(["tables", "--jobs", "2"]).jobs == 2
    monkeypatch.delenv("OSGREEN_JOBS")
    assert build_parser().parse_args(["tables"]).jobs == 1


def test_tables_roundtrip(tmp_path):
    assert _run("tables", "--config", DEFAULT_CFG, "--out", tmp_path) == 0
    for name in ("ai", "aip", "ai1", "ai2", "bi", "ci", "tietjens"):
        f = tmp_path / f"airy_{name}.csv"
        assert roundtrip_csv(f)
        cols, data = read_csv(f)
        assert data.shape == (41 * 41, 4)
    m = json.loads((tmp_path / "manifest.json").read_text())
    assert m["config"]["schema"] == 1 and len(m["files"]) == 7


def test_evans_scan_441_rows(tmp_path):
    assert _run("evans-scan", "--config", DEFAULT_CFG, "--model", "tietjens", "--out", tmp_path, "--jobs", 2) == 0
    cols, data = read_csv(tmp_path / "evans_tietjens.csv")
    assert data.shape == (441, 5)
    assert np.allclose(np.hypot(data[:, 2], data[:, 3]), data[:, 4], rtol=1e-14)


def test_green_deterministic_and_flags_override(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert _run("green", "--config", DEFAULT_CFG, "--approx", "--nu", 1e-5, "--out", d) == 0
    assert (a / "green_approx.csv").read_bytes() == (b / "green_approx.csv").read_bytes()
    m, n = (json.loads((d / "green_manifest.json").read_text()) for d in (a, b))
    # only the recorded output directory may differ
    assert m["config"].pop("run.out") != n["config"].pop("run.out")
    assert m == n
    assert m["config"]["params.nu"] == 1e-5
    assert roundtrip_csv(a / "green_approx.csv")


def test_verify_default_config_passes(tmp_path):
    assert _run("verify", "--config", DEFAULT_CFG, "--against", "direct", "--out", tmp_path) == 0
    rep = json.loads((tmp_path / "verify_report.json").read_text())
    assert rep["ok"] and all(c["pass"] for c in rep["checks"])


def test_verify_failure_exit_code(tmp_path, monkeypatch):
    import osgreen.cli as cli

    def failing(p, against_direct, checks, tag):
        checks.append(dict(name=f"{tag} forced", value=1.0, limit=0.0))
        return {}

    monkeypatch.setattr(cli, "_verify_case", failing)
    assert _run("verify", "--config", DEFAULT_CFG, "--out", tmp_path) == 1
    assert not json.loads((tmp_path / "verify_report.json").read_text())["ok"]


@pytest.mark.parametrize("which", ["langer", "fast", "rayleigh", "slow"])
def test_diag(tmp_path, which):
    assert _run("diag", which, "--config", DEFAULT_CFG, "--out", tmp_path) == 0
    assert roundtrip_csv(tmp_path / f"diag_{which}.csv")
    assert json.loads((tmp_path / f"diag_{which}.json").read_text())["summary"]


def test_config_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("params.nu = 1e-4\n")
    assert _run("tables", "--config", bad, "--out", tmp_path) == 2
    big = tmp_path / "big.cfg"
    vals = list(np.linspace(1, 2, 400).tolist())
    big.write_text(f"schema = 1\nparams.alpha_scale = {vals}\nparams.c_re_scale = {vals}\n")
    assert _run("green", "--config", big, "--out", tmp_path) == 2
    assert "limit" in capsys.readouterr().err
