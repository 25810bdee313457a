"""Truncated Taylor arithmetic ("jets") on arrays of expansion points.

A :class:`Jet` stores normalized Taylor coefficients ``t[k] = f^(k)(z)/k!``
for ``k = 0..order`` at every point of a 1-D sample array.  Products,
quotients and the elementary functions below propagate exact derivatives,
so mode functions and their first few derivatives never need to be
differenced numerically.
"""
from __future__ import annotations

from math import factorial

import numpy as np


class Jet:
    __slots__ = ("t",)

    def __init__(self, coeffs):
        self.t = np.asarray(coeffs, dtype=complex)
        if self.t.ndim == 1:
            self.t = self.t[:, None]

    # -- construction -------------------------------------------------
    @classmethod
    def from_derivatives(cls, derivs):
        d = np.asarray(derivs, dtype=complex)
        scale = np.array([1.0 / factorial(k) for k in range(d.shape[0])])
        return cls(d * scale.reshape((-1,) + (1,) * (d.ndim - 1)))

    @classmethod
    def variable(cls, z, order):
        """The identity map ``z -> z`` expanded at every point of ``z``."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        t = np.zeros((order + 1, z.size), dtype=complex)
        t[0] = z
        if order >= 1:
            t[1] = 1.0
        return cls(t)

    @classmethod
    def constant(cls, value, order, npts):
        t = np.zeros((order + 1, npts), dtype=complex)
        t[0] = value
        return cls(t)

    # -- accessors ------------------------------------------------------
    @property
    def order(self):
        return self.t.shape[0] - 1

    @property
    def npts(self):
        return self.t.shape[1]

    @property
    def value(self):
        return self.t[0]

    def derivatives(self, upto=None):
        """Array ``D[k] = f^(k)``, ``k = 0..upto``."""
        n = self.order if upto is None else upto
        fac = np.array([factorial(k) for k in range(n + 1)], dtype=float)
        return self.t[: n + 1] * fac[:, None]

    def deriv(self, k=1):
        """Jet of the k-th derivative (order drops by k)."""
        t = self.t
        for _ in range(k):
            n = t.shape[0]
            t = t[1:] * np.arange(1, n)[:, None]
        return Jet(t)

    def truncate(self, order):
        return Jet(self.t[: order + 1])

    def __getitem__(self, idx):
        return Jet(self.t[:, idx])

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Jet):
            n = min(self.order, other.order)
            return self.t[: n + 1], other.t[: n + 1]
        t = np.zeros_like(self.t)
        t[0] = other
        return self.t, t

    def __add__(self, other):
        a, b = self._coerce(other)
        return Jet(a + b)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.t)

    def __sub__(self, other):
        a, b = self._coerce(other)
        return Jet(a - b)

    def __rsub__(self, other):
        a, b = self._coerce(other)
        return Jet(b - a)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.t * other)
        a, b = self._coerce(other)
        n = a.shape[0]
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=complex)
        for k in range(n):
            out[k] = np.einsum("j...,j...->...", a[: k + 1], b[k::-1])
        return Jet(out)

    __rmul__ = __mul__

    def reciprocal(self):
        a = self.t
        n = a.shape[0]
        out = np.zeros_like(a)
        out[0] = 1.0 / a[0]
        for k in range(1, n):
            out[k] = -np.einsum("j...,j...->...", a[1 : k + 1], out[k - 1 :: -1]) * out[0]
        return Jet(out)

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.t / other)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, p):
        if isinstance(p, int) and p >= 0:
            out = Jet.constant(1.0, self.order, self.npts)
            for _ in range(p):
                out = out * self
            return out
        return power(self, p)

    def shift_value(self, new_value):
        """Same derivatives, different constant term."""
        t = self.t.copy()
        t[0] = new_value
        return Jet(t)


def exp(f: Jet) -> Jet:
    a = f.t
    n = a.shape[0]
    out = np.zeros_like(a)
    out[0] = np.exp(a[0])
    for k in range(1, n):
        j = np.arange(1, k + 1)[:, None]
        out[k] = np.sum(j * a[1 : k + 1] * out[k - 1 :: -1], axis=0) / k
    return Jet(out)


def log(f: Jet, value=None) -> Jet:
    """Logarithm; ``value`` overrides the constant term (branch choice)."""
    a = f.t
    n = a.shape[0]
    out = np.zeros_like(a)
    out[0] = np.log(a[0]) if value is None else value
    for k in range(1, n):
        j = np.arange(1, k)[:, None]
        s = np.sum(j * out[1:k] * a[k - 1 : 0 : -1], axis=0) if k > 1 else 0.0
        out[k] = (a[k] - s / k) / a[0]
    return Jet(out)


def power(f: Jet, p, value=None) -> Jet:
    """``f**p`` for real/complex ``p`` via the J.C.P. Miller recurrence.

    ``value`` fixes the branch of the constant term; derivatives follow it.
    """
    a = f.t
    n = a.shape[0]
    out = np.zeros_like(a)
    out[0] = a[0] ** p if value is None else value
    for k in range(1, n):
        j = np.arange(1, k + 1)[:, None]
        out[k] = np.sum(((p + 1) * j - k) * a[1 : k + 1] * out[k - 1 :: -1], axis=0) / (k * a[0])
    return Jet(out)


def sqrt(f: Jet, value=None) -> Jet:
    return power(f, 0.5, value)


def compose(coeffs, inner: Jet) -> Jet:
    """Outer function with Taylor coefficients ``coeffs[k]`` (at inner.value)
    composed with ``inner``; ``coeffs`` has shape (>= order+1, npts)."""
    n = inner.order
    h = Jet(inner.t.copy())
    h.t[0] = 0.0
    out = np.zeros_like(inner.t)
    out[0] = coeffs[0]
    hp = Jet.constant(1.0, n, inner.npts)
    for k in range(1, n + 1):
        hp = hp * h
        out += coeffs[k] * hp.t
    return Jet(out)
