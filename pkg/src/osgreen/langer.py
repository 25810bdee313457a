"""Langer transformation around the critical layer and the tilde-Airy modes.

With C(z) = (U(z) - c) / eps the Langer variable is

    zeta_L(z) = gamma (z - z_c) J(z)^{2/3},
    J(z)      = (3/2) int_0^1 s^{1/2} sqrt(rho(z_c + s (z - z_c))) ds,
    rho(t)    = (U(t) - c) / (U'(z_c) (t - z_c)),

which satisfies zeta_L * zeta_L'^2 = C exactly.  The phase change is
g(z) = z_c + zeta_L(z) / gamma (so g(z_c) = z_c and g'(z_c) = 1), and the
modulated Airy solutions are Ai~(z) = g'(z)^{-1/2} Ai(zeta_L(z)), likewise
for Ci.  rho is evaluated through int_0^1 U'(z_c + tau (t - z_c)) dtau, which
avoids the 0/0 at t = z_c and propagates Taylor jets.
"""
from __future__ import annotations

import cmath
from math import comb

import numpy as np
from scipy.special import roots_jacobi

from . import jet as J
from .jet import Jet
from .quadrature import gauss_legendre
from .special import ci_all, airy_all

__all__ = [
    "LangerMap",
    "LangerError",
    "sqrt_lower",
    "airy_taylor",
    "default_sigma1",
    "airy_operator_residual",
]


class LangerError(RuntimeError):
    """Langer map construction or branch tracking failed."""


def sqrt_lower(w):
    """Square root with its cut on the positive imaginary axis.

    For real t and Im z_c > 0, t - z_c stays in the lower half plane, so this
    branch is continuous along the real axis and agrees with the principal
    root off the cut.
    """
    return np.exp(-0.25j * np.pi) * np.sqrt(1j * np.asarray(w, dtype=complex))


def airy_taylor(v0, d0, zeta0, order):
    """Taylor coefficients of a solution of y'' = zeta y at zeta0.

    ``v0``, ``d0`` are the value and derivative there.
    """
    n = np.size(zeta0)
    t = np.zeros((order + 1, n), dtype=complex)
    t[0] = v0
    if order >= 1:
        t[1] = d0
    for k in range(order - 1):
        prev = t[k - 1] if k >= 1 else 0.0
        t[k + 2] = (zeta0 * t[k] + prev) / ((k + 1) * (k + 2))
    return t


class LangerMap:
    """Langer variable zeta_L and the modulated Airy functions."""

    def __init__(self, params, ns=32, ntau=16, chunk=256):
        self.params = params
        self.profile = params.profile
        self.z_c = params.z_c
        self.gamma = params.gamma
        self.U1c = params.U1c
        x, w = roots_jacobi(ns, 0.0, 0.5)
        # int_0^1 s^{1/2} F(s) ds = 2^{-3/2} int_{-1}^1 (1+x)^{1/2} F((1+x)/2) dx
        self._s = 0.5 * (1.0 + x)
        self._ws = w * 2.0 ** -1.5
        self._tau, self._wt = gauss_legendre(ntau)
        self._chunk = chunk
        self._table = {}

    # Taylor table for J: jets of order TABLE_ORDER at centers spaced TABLE_STEP
    # along the real axis; J is analytic on a neighbourhood of [0, sigma1] of
    # radius comparable to the profile's holomorphy radius, so a shift of at
    # most TABLE_STEP/2 loses nothing at double precision.
    TABLE_STEP = 0.02
    TABLE_ORDER = 24

    def _J_fast(self, z, order):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        h = self.TABLE_STEP
        idx = np.rint(z.real / h).astype(np.int64)
        d = z - idx * h
        if np.any(np.abs(d) > 0.75 * h) or order > 8:
            return self._J_jet(z, order)
        need = [i for i in np.unique(idx) if i not in self._table]
        if need:
            cj = self._J_jet(np.array(need, float) * h, self.TABLE_ORDER).t
            for n, i in enumerate(need):
                self._table[i] = cj[:, n]
        K = self.TABLE_ORDER
        coef = np.stack([self._table[i] for i in idx], axis=1)  # (K+1, n)
        out = np.empty((order + 1, z.size), complex)
        for m in range(order + 1):
            acc = np.zeros(z.size, complex)
            for k in range(K, m - 1, -1):
                acc = acc * d + comb(k, m) * coef[k]
            out[m] = acc
        return Jet(out)

    # -- core jets ----------------------------------------------------------
    def _J_jet(self, z, order):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        out = np.zeros((order + 1, z.size), dtype=complex)
        s, ws, tau, wt = self._s, self._ws, self._tau, self._wt
        for lo in range(0, z.size, self._chunk):
            zz = z[lo : lo + self._chunk]
            m = zz.size
            dz = zz - self.z_c
            scale = tau[:, None] * s[None, :]  # (nt, ns)
            w_pts = self.z_c + scale[:, :, None] * dz[None, None, :]
            Ujet = self.profile.jet(w_pts.ravel(), order + 1).t  # (order+2, N)
            k = np.arange(order + 1)
            up = Ujet[1:] * (k + 1)[:, None]  # U' jet at w
            up = up.reshape(order + 1, tau.size, s.size, m)
            up = up * scale[None, :, :, None] ** k[:, None, None, None]
            rho = np.einsum("ktsm,t->ksm", up, wt) / self.U1c  # (order+1, ns, m)
            rho_j = Jet(rho.reshape(order + 1, -1))
            sq = J.sqrt(rho_j).t.reshape(order + 1, s.size, m)
            out[:, lo : lo + m] = 1.5 * np.einsum("ksm,s->km", sq, ws)
        return Jet(out)

    def zeta(self, z, order=0) -> Jet:
        """Jet of zeta_L at each point of ``z``."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        Jj = self._J_fast(z, order)
        if np.any(np.abs(np.angle(Jj.value)) > 0.5 * np.pi):
            raise LangerError("J(z) left the right half plane; sigma1 too large")
        Jp = J.power(Jj, 2.0 / 3.0)
        lin = Jet.variable(z - self.z_c, order)
        return Jp * lin * self.gamma

    def g(self, z, order=1):
        """(g, g', ...) as a jet: g = z_c + zeta_L / gamma."""
        zj = self.zeta(z, order)
        return zj / self.gamma + self.z_c

    def g_and_prime(self, z):
        gj = self.g(z, 1)
        return gj.t[0], gj.t[1]

    def amplitude(self, z, order=0) -> Jet:
        """f = g'^{-1/2} as a jet (order refers to f)."""
        gj = self.g(z, order + 1)
        gp = gj.deriv(1)
        return J.power(gp, -0.5)

    # -- C_1 and B_1 ----------------------------------------------------------
    def C1(self, z):
        """C_1(z) = (2/3) (gamma (z - z_c))^{3/2} J(z) with the lower-cut root."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        Jv = self._J_fast(z, 0).value
        r = sqrt_lower(self.gamma * (z - self.z_c))
        return (2.0 / 3.0) * r ** 3 * Jv

    def B1(self, w):
        """B_1(w) = (2/3) (gamma (w - z_c))^{3/2}: phase of the linearized problem."""
        w = np.atleast_1d(np.asarray(w, dtype=complex))
        r = sqrt_lower(self.gamma * (w - self.z_c))
        return (2.0 / 3.0) * r ** 3

    def C1_direct(self, z, n=64):
        """Independent quadrature of int_{z_c}^z sqrt(C(t)) dt.

        The substitution t = z_c + u^2 (z - z_c) removes the square-root
        endpoint behaviour; the branch of sqrt(C) is tracked continuously
        from u = 1 where Re sqrt(C) >= 0 is imposed (the mu_f convention).
        """
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        x, w = gauss_legendre(n)
        u = x[::-1]  # from 1 down to 0 for branch tracking
        wu = w[::-1]
        out = np.empty(z.size, dtype=complex)
        eps = self.params.eps
        c = self.params.c
        for i, zz in enumerate(z):
            dz = zz - self.z_c
            t = self.z_c + u ** 2 * dz
            root = np.sqrt((self.profile.eval(t) - c) / eps)
            # continuity: flip signs so consecutive samples stay aligned
            if root[0].real < 0:
                root[0] = -root[0]
            for k in range(1, root.size):
                if abs(root[k] + root[k - 1]) < abs(root[k] - root[k - 1]):
                    root[k] = -root[k]
            out[i] = np.sum(wu * root * 2.0 * u * dz)
        return out

    # -- modulated Airy functions ----------------------------------------------
    def tilde(self, kind, z, order=2):
        """Jet (order ``order``) of Ai~ or Ci~ at the points ``z``."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        zj = self.zeta(z, order + 1)
        zeta0 = zj.value
        if kind.lower() == "ai":
            v, d, _, _ = airy_all(zeta0)
        elif kind.lower() == "ci":
            v, d, _, _ = ci_all(zeta0)
        else:
            raise ValueError(kind)
        coeffs = airy_taylor(v, d, zeta0, order)
        comp = J.compose(coeffs, zj.truncate(order))
        gp = (zj / self.gamma).deriv(1)
        f = J.power(gp, -0.5).truncate(order)
        return f * comp

    def fpp(self, z):
        """Second derivative of the amplitude f = g'^{-1/2}."""
        return self.amplitude(z, 2).derivatives(2)[2]


def airy_operator_residual(params, psi_jet: Jet, z):
    """A(psi) = -eps psi'' + (U - c) psi from a jet of order >= 2."""
    d = psi_jet.derivatives(2)
    u = params.profile.eval(np.asarray(z, dtype=complex))
    return -params.eps * d[2] + (u - params.c) * d[0]


def default_sigma1(params, target=10.0):
    """Matching abscissa: max(min(0.3, holo/2), first z with |zeta_L| >= target)."""
    prof = params.profile
    cap = prof.holo_radius / 2.0
    base = min(0.3, cap)
    lm = LangerMap(params)
    if abs(lm.zeta(base).value[0]) >= target:
        return base
    lo, hi = base, base
    while True:
        hi = hi * 1.5
        if hi > cap:
            raise LangerError(
                f"|zeta_L| < {target} up to holo_radius/2 = {cap:.3g}; increase nu^-1 or use a wider profile"
            )
        if abs(lm.zeta(hi).value[0]) >= target:
            break
        lo = hi
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if abs(lm.zeta(mid).value[0]) >= target:
            hi = mid
        else:
            lo = mid
        if hi - lo < 1e-10 * hi:
            break
    return hi
