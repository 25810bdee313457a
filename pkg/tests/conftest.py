"""Shared fixtures: parameter sets and expensive objects cached per session."""
from __future__ import annotations

from functools import lru_cache

import numpy as np
import pytest

from osgreen.profile import make_exponential_profile, make_params

ACCEPTANCE = {}


def record(key, ok, detail):
    """Store and print one acceptance line."""
    line = f"{key} {'PASS' if ok else 'FAIL'}: {detail}"
    ACCEPTANCE[key] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[key])


PROFILE = make_exponential_profile(1.0, 1.0)


@lru_cache(maxsize=None)
def default_params(nu, c_re=0.5, c_im=0.5, alpha_scale=1.0):
    q = nu ** 0.25
    return make_params(PROFILE, nu, alpha_scale * q, complex(c_re, c_im) * q)


@lru_cache(maxsize=None)
def assembler(nu):
    from osgreen.green import GreenAssembler

    return GreenAssembler(default_params(nu))


@lru_cache(maxsize=None)
def green_table(nu):
    from osgreen.green import default_x_grid, default_z_grid

    A = assembler(nu)
    p = A.params
    xg = default_x_grid(p)
    zg = default_z_grid(p, xg)
    return A.table(xg, zg)


@lru_cache(maxsize=None)
def direct_table(nu):
    from types import SimpleNamespace

    from osgreen.oracle import DirectSolver

    T = green_table(nu)
    G, dG, info = DirectSolver.from_params(default_params(nu)).table(T.x_grid, T.z_grid)
    return SimpleNamespace(x_grid=T.x_grid, z_grid=T.z_grid, G=G, dzG=dG, info=info)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def p4():
    return default_params(1e-4)


@pytest.fixture(scope="session")
def p5():
    return default_params(1e-5)
