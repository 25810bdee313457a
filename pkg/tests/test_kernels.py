import os
import subprocess
import sys

import numpy as np
import pytest

from osgreen import _kernels_py, kernels
from osgreen.oracle import DirectSolver
from osgreen.profile import make_exponential_profile

try:
    from osgreen import _kernels as _cy
except ImportError:  # pragma: no cover - exercised only without a compiler
    _cy = None

needs_cy = pytest.mark.skipif(_cy is None, reason="compiled extension not built")


def _inputs(rng, n=300):
    c = lambda m: rng.standard_normal(m) + 1j * rng.standard_normal(m)  # noqa: E731
    h = rng.uniform(0.01, 0.1, n)
    r = np.exp(-rng.uniform(0, 0.1, n) + 1j * rng.uniform(-0.1, 0.1, n))
    return h, r, c(n), c(n)


def _close(a, b, tol=1e-12):
    if isinstance(a, tuple):
        return all(_close(x, y, tol) for x, y in zip(a, b))
    a, b = np.asarray(a), np.asarray(b)
    return np.max(np.abs(a - b)) <= tol * max(1.0, np.max(np.abs(b)))


@needs_cy
def test_recurrences_agree():
    rng = np.random.default_rng(3)
    h, r, D, M = _inputs(rng)
    for name, args in [("dprim_backward", (h, r, D, M, 1j, 2.0)), ("dprim_forward", (h, r, D, M, 1j, 2.0)),
                       ("linrec_forward", (r, D, 1j)), ("linrec_backward", (r, D, 1j))]:
        args = tuple(np.ascontiguousarray(a) if isinstance(a, np.ndarray) else complex(a) for a in args)
        assert _close(getattr(_cy, name)(*args), getattr(_kernels_py, name)(*args)), name


@needs_cy
def test_taylor_agrees():
    rng = np.random.default_rng(4)
    m = 50
    z0 = 3 * (rng.standard_normal(m) + 1j * rng.standard_normal(m))
    f = [rng.standard_normal(m) + 0j for _ in range(3)]
    h = np.full(m, 0.7 + 0.2j)
    a = _cy.airy_taylor_step(z0, *f, h, 1e-18, 400)
    b = _kernels_py.airy_taylor_step(z0, *f, h, 1e-18, 400)
    assert _close(a, b, 1e-13)


@needs_cy
def test_sweep_and_chain_agree():
    nu = 1e-4
    ds = DirectSolver(make_exponential_profile(1, 1), nu, nu ** 0.25, (0.5 + 0.5j) * nu ** 0.25)
    g = ds.grid()[:2001]
    h, a, b = ds._coeffs(g)
    Y0 = ds._far_vectors()
    a, b = np.ascontiguousarray(a), np.ascontiguousarray(b)
    qc, rc, ec, r0c = _cy.orr_dopri_sweep(h, a, b, ds.s, ds.alpha ** 2, Y0)
    qp, rp, ep, r0p = _kernels_py.orr_dopri_sweep(h, a, b, ds.s, ds.alpha ** 2, Y0)
    assert _close(qc, qp, 1e-11) and _close(rc, rp, 1e-11) and _close(r0c, r0p)
    assert ec == pytest.approx(ep, rel=1e-6)
    # orthonormal columns
    G = np.einsum("kij,kil->kjl", qc.conj(), qc)
    assert np.max(np.abs(G - np.eye(2))) < 1e-13
    for direction in (-1, 1):
        x = _cy.chain_solve(rc, 1000, np.array([1.0, 1j]), direction)
        y = _kernels_py.chain_solve(rc, 1000, np.array([1.0, 1j]), direction)
        assert _close(x, y, 1e-12)


def test_backend_selection():
    assert kernels.BACKEND in ("cython", "python")
    assert kernels.get_backend("python") is _kernels_py
    env = dict(os.environ, OSGREEN_PURE="1")
    out = subprocess.run([sys.executable, "-c", "import osgreen.kernels as k; print(k.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
