"""Composite Gauss-Legendre quadrature on graded panels.

Integrands in this package carry two kinds of structure: near-poles at the
complex critical layer z_c (softened by Im z_c) and exponentials varying on
the fast scale 1/|mu_f|.  Panels are laid out from a local width function
and the requested query points are always inserted as panel boundaries, so
cumulative integrals are returned exactly at those points.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

__all__ = ["gauss_legendre", "breakpoints_from_width", "PanelRule", "layer_width", "PiecewiseAntiderivative",
           "legendre_coefficients", "legendre_eval"]


@lru_cache(maxsize=16)
def gauss_legendre(n: int):
    """Nodes and weights of the n-point rule on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def breakpoints_from_width(a, b, width, forced=(), nsample=4000):
    """Panel boundaries on [a, b] with local width at most ``width(z)``.

    ``width`` is a vectorized positive function.  The panel count is obtained
    by integrating the density 1/width on a sample grid (uniform in
    log(1 + z) so that both small and large scales are seen).
    """
    a = float(a)
    b = float(b)
    if b <= a:
        return np.array([a, b])
    forced = np.asarray(forced, float)
    forced = forced[(forced > a) & (forced < b)]
    s = np.linspace(np.log1p(a - a), np.log1p(b - a), nsample)
    zs = a + np.expm1(s)
    zs = np.unique(np.concatenate([zs, forced, [a, b]]))
    dens = 1.0 / np.asarray(width(zs), float)
    # trapezoid with the max of neighbouring densities (conservative)
    seg = np.diff(zs) * np.maximum(dens[1:], dens[:-1])
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    n = max(1, int(np.ceil(cum[-1])))
    targets = np.linspace(0.0, cum[-1], n + 1)
    bp = np.interp(targets, cum, zs)
    bp = np.unique(np.concatenate([bp, forced, [a, b]]))
    return bp


def layer_width(zc, hmax=0.5, ratio=0.5, min_width=None):
    """Width function clustering panels at Re z_c on the scale |Im z_c|."""
    xr = zc.real
    xi = max(abs(zc.imag), 1e-12)
    mw = min_width if min_width is not None else 0.5 * xi

    def width(z):
        d = np.sqrt((z - xr) ** 2 + xi ** 2)
        return np.clip(ratio * d, mw, hmax)

    return width


class PanelRule:
    """Composite rule on a fixed set of panel boundaries."""

    def __init__(self, breaks, order=16):
        self.breaks = np.asarray(breaks, float)
        self.order = order
        x, w = gauss_legendre(order)
        h = np.diff(self.breaks)
        self.h = h
        self.nodes = (self.breaks[:-1, None] + h[:, None] * x[None, :]).ravel()
        self.weights = (h[:, None] * w[None, :]).ravel()
        self.npanel = h.size

    def panel_sums(self, vals):
        """Per-panel integrals of node values (leading axis = nodes)."""
        v = np.asarray(vals)
        v = v.reshape((self.npanel, self.order) + v.shape[1:])
        w = self.weights.reshape(self.npanel, self.order)
        return np.einsum("pk...,pk->p...", v, w)

    def cumulative(self, vals):
        """Integral from breaks[0] to every break point."""
        ps = self.panel_sums(vals)
        out = np.zeros((self.npanel + 1,) + ps.shape[1:], dtype=ps.dtype)
        np.cumsum(ps, axis=0, out=out[1:])
        return out

    def tail(self, vals):
        """Integral from every break point to breaks[-1]."""
        ps = self.panel_sums(vals)
        out = np.zeros((self.npanel + 1,) + ps.shape[1:], dtype=ps.dtype)
        out[:-1] = np.cumsum(ps[::-1], axis=0)[::-1]
        return out

    def index_of(self, points):
        """Indices of ``points`` among the break points (must be present)."""
        idx = np.searchsorted(self.breaks, points)
        idx = np.clip(idx, 0, self.breaks.size - 1)
        bad = np.abs(self.breaks[idx] - points) > 1e-12 * (1 + np.abs(points))
        if np.any(bad):
            raise ValueError("query point is not a panel boundary")
        return idx


@lru_cache(maxsize=8)
def _legendre_projector(order):
    xg, wg = np.polynomial.legendre.leggauss(order)
    V = np.polynomial.legendre.legvander(xg, order - 1)
    # Gauss quadrature is exact for the products, so this is the interpolant
    return (V * wg[:, None]).T * (np.arange(order) + 0.5)[:, None]


def legendre_coefficients(vals):
    """Legendre coefficients (order, npanel) of panel interpolants.

    ``vals`` has shape (npanel, order) and holds samples at the Gauss nodes.
    """
    vals = np.asarray(vals)
    return _legendre_projector(vals.shape[1]) @ vals.T


def legendre_eval(coef, j, x):
    """Evaluate column ``coef[:, j[i]]`` at the reference point ``x[i]``."""
    n = coef.shape[0]
    p_prev = np.ones_like(x)
    acc = coef[0, j] * p_prev
    if n == 1:
        return acc
    p = x.copy()
    acc = acc + coef[1, j] * p
    for k in range(2, n):
        p_new = ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
        p_prev, p = p, p_new
        acc = acc + coef[k, j] * p
    return acc


class PiecewiseAntiderivative:
    """Antiderivative of a smooth function from panelwise Legendre interpolants.

    ``func`` is sampled at the Gauss nodes of every panel; the interpolant of
    degree order-1 is integrated exactly, so F(z) = int_{breaks[0]}^z func is
    available at arbitrary points of [breaks[0], breaks[-1]].
    """

    def __init__(self, breaks, func, order=16):
        self.rule = PanelRule(breaks, order)
        self.order = order
        vals = np.asarray(func(self.rule.nodes)).reshape(self.rule.npanel, order)
        coef = legendre_coefficients(vals)
        icoef = np.polynomial.legendre.legint(coef, lbnd=-1, axis=0)
        self._icoef = icoef * (0.5 * self.rule.h)[None, :]
        self.at_breaks = np.concatenate([[0.0], np.cumsum(self._panel_total())])

    def _panel_total(self):
        # value of the integrated series at x = +1 is the sum of coefficients
        return self._icoef.sum(axis=0)

    def __call__(self, z):
        z = np.asarray(z, float)
        br = self.rule.breaks
        j = np.clip(np.searchsorted(br, z, side="right") - 1, 0, self.rule.npanel - 1)
        x = 2.0 * (z - br[j]) / self.rule.h[j] - 1.0
        return self.at_breaks[j] + legendre_eval(self._icoef, j, x)
