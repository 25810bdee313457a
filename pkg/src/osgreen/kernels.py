"""Selection between the compiled kernels and the pure-Python fallback.

The compiled extension is used when it imports cleanly, unless the
environment variable ``OSGREEN_PURE`` is set to a true value.  ``BACKEND``
records the choice ("cython" or "python").
"""
from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

__all__ = ["BACKEND", "dprim_backward", "dprim_forward", "linrec_forward", "linrec_backward", "airy_taylor_step",
           "orr_dopri_sweep", "chain_solve", "get_backend"]


def _want_pure():
    return os.environ.get("OSGREEN_PURE", "").strip().lower() in ("1", "true", "yes", "on")


def get_backend(name=None):
    """Return the kernel module for ``name`` ("cython", "python" or None=auto)."""
    if name == "python" or (name is None and _want_pure()):
        return _kernels_py
    try:
        from . import _kernels  # type: ignore[attr-defined]
    except ImportError:
        if name == "cython":
            raise
        return _kernels_py
    return _kernels


_mod = get_backend()
BACKEND = "python" if _mod is _kernels_py else "cython"


def _c(a):
    return np.ascontiguousarray(a, dtype=complex)


def _f(a):
    return np.ascontiguousarray(a, dtype=float)


def dprim_backward(h, r, D, M, phi_end=0j, dphi_end=0j):
    return _mod.dprim_backward(_f(h), _c(r), _c(D), _c(M), complex(phi_end), complex(dphi_end))


def dprim_forward(h, r, D, N, phi0=0j, dphi0=0j):
    return _mod.dprim_forward(_f(h), _c(r), _c(D), _c(N), complex(phi0), complex(dphi0))


def linrec_forward(r, c, p0=0j):
    return _mod.linrec_forward(_c(r), _c(c), complex(p0))


def linrec_backward(r, c, pn=0j):
    return _mod.linrec_backward(_c(r), _c(c), complex(pn))


def airy_taylor_step(z0, f0, fp0, f1_0, h, tol, maxterms=400):
    """One Taylor step of the Airy equation at every point (see ``special``)."""
    z0 = np.asarray(z0, complex)
    shape = np.broadcast_shapes(z0.shape, np.shape(h), np.shape(f0))
    args = [np.array(np.broadcast_to(a, shape), dtype=complex).ravel() for a in (z0, f0, fp0, f1_0, h)]
    out = _mod.airy_taylor_step(*args, float(tol), int(maxterms))
    return tuple(o.reshape(shape) for o in out)


def orr_dopri_sweep(h, a, b, s, al2, Y0):
    """Orthonormalized DOPRI5 sweep (see ``_kernels_py.orr_dopri_sweep``)."""
    a = np.ascontiguousarray(a, dtype=complex)
    b = np.ascontiguousarray(b, dtype=complex)
    return _mod.orr_dopri_sweep(_f(h), a, b, float(s), float(al2), np.ascontiguousarray(Y0, dtype=complex))


def chain_solve(R, m, c, direction):
    """Propagate QR coefficients away from index m (see ``_kernels_py.chain_solve``)."""
    return _mod.chain_solve(np.ascontiguousarray(R, dtype=complex), int(m), np.asarray(c, complex),
                            int(direction))
