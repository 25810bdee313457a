"""Compare the compiled kernels with the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--size N] [--repeat R] [--json out.json]

For every kernel the same inputs are passed to both backends; the script
reports the best wall time of each, the speed-up, and the maximum relative
difference of the outputs.
"""
from __future__ import annotations

import argparse
import json
import timeit

import numpy as np

from osgreen import _kernels_py
from osgreen.kernels import get_backend
from osgreen.oracle import DirectSolver
from osgreen.profile import make_exponential_profile


def _cases(n, rng):
    cplx = lambda m: rng.standard_normal(m) + 1j * rng.standard_normal(m)  # noqa: E731
    h = rng.uniform(0.001, 0.01, n)
    r = np.exp(-rng.uniform(0, 0.1, n)) * np.exp(1j * rng.uniform(-0.1, 0.1, n))
    D, M = cplx(n), cplx(n)
    yield "dprim_backward", (h, r, D, M, 1 + 0j, 0.5j)
    yield "dprim_forward", (h, r, D, M, 1 + 0j, 0.5j)
    yield "linrec_forward", (r, D, 1 + 0j)
    yield "linrec_backward", (r, D, 1 + 0j)
    m = max(n // 10, 10)
    z0 = cplx(m) * 3
    yield "airy_taylor_step", (z0, cplx(m), cplx(m), cplx(m), np.full(m, 0.5 + 0j), 1e-18, 400)
    nu = 1e-4
    ds = DirectSolver(make_exponential_profile(1.0, 1.0), nu, nu ** 0.25, (0.5 + 0.5j) * nu ** 0.25)
    g = ds.grid()[: n + 1]
    hh, a, b = ds._coeffs(g)
    Y0 = ds._far_vectors()
    yield "orr_dopri_sweep", (hh, np.ascontiguousarray(a), np.ascontiguousarray(b), ds.s, ds.alpha ** 2, Y0)
    Q, R, err, R0 = _kernels_py.orr_dopri_sweep(hh, a, b, ds.s, ds.alpha ** 2, Y0)
    yield "chain_solve", (R, R.shape[0] // 2, np.array([1.0, 0.5j]), 1)


def _maxdiff(x, y):
    if isinstance(x, tuple):
        return max(_maxdiff(a, b) for a, b in zip(x, y))
    x, y = np.asarray(x), np.asarray(y)
    return float(np.max(np.abs(x - y)) / max(np.max(np.abs(y)), 1e-300))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json")
    args = ap.parse_args(argv)
    py = get_backend("python")
    try:
        cy = get_backend("cython")
    except ImportError:
        print("compiled extension not available; build it with pip install -e . --no-build-isolation")
        return 1
    rng = np.random.default_rng(12345)
    rows = []
    print(f"{'kernel':<20}{'python [s]':>14}{'cython [s]':>14}{'speed-up':>10}{'max rel diff':>15}")
    for name, inp in _cases(args.size, rng):
        fp, fc = getattr(py, name), getattr(cy, name)
        tp = min(timeit.repeat(lambda: fp(*inp), number=1, repeat=args.repeat))
        tc = min(timeit.repeat(lambda: fc(*inp), number=1, repeat=args.repeat))
        d = _maxdiff(fc(*inp), fp(*inp))
        rows.append(dict(kernel=name, python=tp, cython=tc, speedup=tp / tc, max_rel_diff=d))
        print(f"{name:<20}{tp:>14.4e}{tc:>14.4e}{tp / tc:>10.1f}{d:>15.2e}")
    if args.json:
        with open(args.json, "w") as f:
            json.dump(rows, f, indent=2)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
