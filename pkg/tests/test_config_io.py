import numpy as np
import pytest

from osgreen.config import MAX_CASES, ConfigError, load_config, parse_config
from osgreen.io import format_csv, read_csv, roundtrip_csv, write_csv, write_json


def test_parse_and_override():
    cfg = parse_config("schema = 1\nparams.nu = 1e-5  # comment\nprofile.kind = tanh\nscan.n_re = 5\n")
    assert cfg["params.nu"] == 1e-5
    assert cfg["profile.kind"] == "tanh"
    assert cfg["scan.n_re"] == 5 and isinstance(cfg["scan.n_re"], int)
    cfg.override("params.nu", 3e-5)
    assert cfg.single_case().nu == 3e-5
    assert cfg.as_dict()["schema"] == 1


@pytest.mark.parametrize("text, msg", [
    ("params.nu = 1e-4\n", "schema"),
    ("schema = 2\n", "schema"),
    ("schema = 1\nparams.nu = 1\nparams.nu = 2\n", "duplicate"),
    ("schema = 1\nbogus.key = 1\n", "unknown key"),
    ("schema = 1\nscan.n_re = 2.5\n", "integer"),
    ("schema = 1\nparams.nu = [\n", "cannot parse"),
    ("schema = 1\njust words\n", "key = value"),
])
def test_config_errors(text, msg):
    with pytest.raises(ConfigError, match=msg):
        parse_config(text, source="t.cfg")


def test_error_carries_line_number():
    with pytest.raises(ConfigError, match="t.cfg:3"):
        parse_config("schema = 1\n\nparams.nu = 'x'\n", source="t.cfg")


def test_ranged_cases_and_limit():
    cfg = parse_config("schema = 1\nparams.nu = [1e-4, 1e-5]\nparams.alpha_scale = [1, 2, 3]\n")
    cases = cfg.cases()
    assert len(cases) == 6
    assert cases[0].alpha == pytest.approx(1e-4 ** 0.25)
    with pytest.raises(ConfigError, match="single"):
        cfg.single_case()
    big = list(np.linspace(1, 2, 400).tolist())
    cfg = parse_config(f"schema = 1\nparams.alpha_scale = {big}\nparams.c_re_scale = {big}\n")
    assert 400 * 400 > MAX_CASES
    with pytest.raises(ConfigError, match="limit"):
        cfg.cases()


def test_shipped_default_config():
    from pathlib import Path

    cfg = load_config(Path(__file__).parents[1] / "configs" / "default.cfg")
    p = cfg.params()
    assert p.nu == 1e-4
    assert cfg["scan.n_re"] * cfg["scan.n_im"] == 441


def test_csv_roundtrip(tmp_path, rng):
    vals = rng.standard_normal((50, 3)) * 10.0 ** rng.integers(-300, 300, (50, 3))
    vals[0, 0] = np.nan
    vals[1, 1] = 1 / 3
    f = write_csv(tmp_path / "a.csv", ["a", "b", "c"], vals)
    cols, back = read_csv(f)
    assert cols == ["a", "b", "c"]
    assert np.array_equal(back, vals, equal_nan=True)
    assert roundtrip_csv(f)
    assert "\r" not in format_csv(["a"], [[1.0]])


def test_json_handles_complex_and_numpy(tmp_path):
    import json

    f = tmp_path / "m.json"
    write_json(f, {"b": np.float64(1.5), "a": 1 + 2j, "c": np.arange(3)})
    d = json.loads(f.read_text())
    assert list(d) == ["a", "b", "c"]
    assert d["b"] == 1.5 and d["c"] == [0, 1, 2]
