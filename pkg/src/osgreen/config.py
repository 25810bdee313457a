"""Run configuration: a versioned key-value file plus command-line overrides.

File format, one assignment per line::

    schema = 1
    # comment
    profile.kind = exponential
    profile.U_plus = 1.0
    params.nu = [1e-4, 1e-5]      # lists make a value ranged

Values are JSON literals (numbers, lists, quoted strings, true/false); a bare
word is taken as a string.  A ranged configuration expands to the cartesian
product of its lists, which must not exceed ``MAX_CASES`` cases.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

from .profile import ParameterError, make_params, profile_from_spec

__all__ = ["ConfigError", "RunConfig", "Case", "parse_config", "load_config", "DEFAULTS", "MAX_CASES"]

SCHEMA = 1
MAX_CASES = 100_000

DEFAULTS = {
    "profile.kind": "exponential",
    "profile.U_plus": 1.0,
    "profile.beta": 1.0,
    "params.nu": 1e-4,
    "params.alpha_scale": 1.0,
    "params.c_re_scale": 0.5,
    "params.c_im_scale": 0.5,
    "params.sigma0": 0.1,
    "params.sigma1": None,
    "scan.c_re_min": 0.1,
    "scan.c_re_max": 3.0,
    "scan.c_im_min": 0.1,
    "scan.c_im_max": 1.5,
    "scan.n_re": 21,
    "scan.n_im": 21,
    "tables.radius": 6.0,
    "tables.n": 41,
    "tables.arg": None,
    "run.seed": 0,
    "run.out": "osgreen_out",
}
RANGED = ("params.nu", "params.alpha_scale", "params.c_re_scale", "params.c_im_scale")
_INT_KEYS = ("scan.n_re", "scan.n_im", "tables.n", "run.seed")


class ConfigError(ValueError):
    """Invalid configuration, with file/line/key context."""


@dataclass(frozen=True)
class Case:
    """One point of a (possibly ranged) configuration."""

    nu: float
    alpha_scale: float
    c_re_scale: float
    c_im_scale: float

    @property
    def alpha(self):
        return self.alpha_scale * self.nu ** 0.25

    @property
    def c(self):
        return complex(self.c_re_scale, self.c_im_scale) * self.nu ** 0.25


@dataclass
class RunConfig:
    values: dict = field(default_factory=lambda: dict(DEFAULTS))
    source: str = "<defaults>"

    def __getitem__(self, key):
        return self.values[key]

    def override(self, key, value, origin="flag"):
        """Set ``key`` (flags take precedence over the file)."""
        self.values[key] = _check_value(key, value, origin)
        return self

    def profile(self):
        v = self.values
        try:
            return profile_from_spec(v["profile.kind"], v["profile.U_plus"], v["profile.beta"])
        except ParameterError as e:
            raise ConfigError(f"{self.source}: profile: {e}") from None

    def cases(self):
        lists = []
        for k in RANGED:
            val = self.values[k]
            lists.append(list(val) if isinstance(val, list) else [val])
        n = math.prod(len(x) for x in lists)
        if n > MAX_CASES:
            raise ConfigError(f"{self.source}: ranged configuration expands to {n} cases (limit {MAX_CASES})")
        return [Case(*map(float, t)) for t in itertools.product(*lists)]

    def single_case(self):
        cs = self.cases()
        if len(cs) != 1:
            raise ConfigError(f"{self.source}: this command needs a single parameter case, got {len(cs)}")
        return cs[0]

    def params(self, case: Case | None = None, check_gap=True):
        case = case or self.single_case()
        v = self.values
        try:
            return make_params(self.profile(), case.nu, case.alpha, case.c, sigma0=v["params.sigma0"],
                               sigma1=v["params.sigma1"], check_gap=check_gap)
        except ParameterError as e:
            raise ConfigError(f"{self.source}: params: {e}") from None

    def as_dict(self):
        return {"schema": SCHEMA, **self.values}


def _check_value(key, value, origin):
    if key not in DEFAULTS:
        raise ConfigError(f"{origin}: unknown key {key!r}")
    if key in RANGED and isinstance(value, list):
        if not value:
            raise ConfigError(f"{origin}: key {key!r}: empty list")
        return [_check_value(key, v, origin) for v in value]
    if key == "profile.kind" or key == "run.out":
        if not isinstance(value, str):
            raise ConfigError(f"{origin}: key {key!r}: expected a string")
        return value
    if key in ("params.sigma1", "tables.arg") and value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{origin}: key {key!r}: expected a number, got {value!r}")
    if key in _INT_KEYS:
        if int(value) != value:
            raise ConfigError(f"{origin}: key {key!r}: expected an integer")
        return int(value)
    return float(value)


def _literal(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        if text.replace("_", "").replace("-", "").isalnum():
            return text
        raise


def parse_config(text, source="<string>") -> RunConfig:
    cfg = RunConfig(source=source)
    schema = None
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        if "=" not in line:
            raise ConfigError(f"{where}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        if key in seen:
            raise ConfigError(f"{where}: duplicate key {key!r}")
        seen.add(key)
        try:
            value = _literal(val)
        except json.JSONDecodeError:
            raise ConfigError(f"{where}: key {key!r}: cannot parse value {val!r}") from None
        if key == "schema":
            schema = value
            continue
        cfg.override(key, value, origin=where)
    if schema != SCHEMA:
        raise ConfigError(f"{source}: 'schema = {SCHEMA}' is required (got {schema!r})")
    return cfg


def load_config(path) -> RunConfig:
    with open(path) as f:
        return parse_config(f.read(), source=str(path))
