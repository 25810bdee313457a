"""Rayleigh-operator machinery.

Ray_alpha = (U - c)(d^2 - alpha^2) - U''.  Two explicit solutions of
Ray_0 phi = 0 are

    phi_{1,0} = U - c,
    phi_{2,0} = (U - c) K,   K(z) = int_0^z (U - c)^{-2} + 1/(c U'(0)),

normalized so that W = phi_{2,0}' phi_{1,0} - phi_{2,0} phi_{1,0}' = 1 and
phi_{2,0}(0) = -1/U'(0).  The pole of (U - c)^{-2} lies at the complex
point z_c, so K is integrated along the real axis on panels graded towards
Re z_c on the scale |Im z_c|.

The Green kernel of Ray_0 is
    G_{R,0}(x, z) = -(U(x) - c)^{-1} [phi_1(z) phi_2(x) 1_{x<z} + phi_1(x) phi_2(z) 1_{x>z}]
and G_{R,alpha}(x, z) = exp(-alpha (z - x)) G_{R,0}(x, z).  For
F = exp(alpha x) f one gets

    RaySolver_alpha(f) = exp(-alpha z) Y,  Y = -phi_1 I_1 - phi_2 I_2,
    I_1 = int_0^z K F,   I_2 = int_z^inf F,

with Y' = -phi_1' I_1 - phi_2' I_2 and (U - c) Y'' = U'' Y + F, and
Ray_alpha(RaySolver_alpha f) = f + Err(f), Err(f) = -2 alpha (U - c) exp(-alpha z) Y'.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from .jet import Jet
from .modefunc import ModeFunction
from .quadrature import PanelRule, PiecewiseAntiderivative, breakpoints_from_width, layer_width

__all__ = [
    "Rayleigh",
    "NormProfile",
    "RayleighPreconditionError",
    "ode_jet",
    "phi_10",
    "phi_20",
    "green_R",
    "ray_solver",
    "err_R",
]


class RayleighPreconditionError(ValueError):
    """Forcing outside the admissible class or |Im c| too small."""


def ode_jet(y0, y1, a, b, rhs, order):
    """Taylor jet of y solving a y'' = b y + rhs, from y(z0), y'(z0).

    ``a``, ``b``, ``rhs`` are jets of order >= order - 2.  Returns a Jet of
    ``order`` (normalized coefficients).
    """
    n = np.size(y0)
    t = np.zeros((order + 1, n), complex)
    t[0] = y0
    if order >= 1:
        t[1] = y1
    ypp = np.zeros((max(order - 1, 0), n), complex)  # coefficients of y''
    for k in range(order - 1):
        # (b y + rhs)_k
        s = rhs.t[k].copy()
        for j in range(k + 1):
            s = s + b.t[j] * t[k - j]
        for j in range(1, k + 1):
            s = s - a.t[j] * ypp[k - j]
        ypp[k] = s / a.t[0]
        t[k + 2] = ypp[k] / ((k + 1) * (k + 2))
    return Jet(t)


@dataclass
class NormProfile:
    """Weighted sup-norms X^eta and Y^eta on a sampled grid."""

    eta: float
    kind: str = "X"

    def x_norm(self, z, f):
        z = np.asarray(z, float)
        return float(np.max(np.abs(f) * np.exp(self.eta * z)))

    def y_norm(self, z, d, z_c):
        """d = (f, f', f''); near-layer weights for z <= 1, exponential beyond."""
        z = np.asarray(z, float)
        r = np.abs(z - z_c)
        near = z <= 1.0
        w1 = np.where(near, 1.0 / (1.0 + np.abs(np.log(r))), np.exp(self.eta * z))
        w2 = np.where(near, 1.0 / (1.0 + 1.0 / r), np.exp(self.eta * z))
        w0 = np.where(near, 1.0, np.exp(self.eta * z))
        return float(max(np.max(np.abs(d[0]) * w0), np.max(np.abs(d[1]) * w1), np.max(np.abs(d[2]) * w2)))

    def norm(self, z, d, z_c=None):
        if self.kind.upper() == "X":
            return self.x_norm(z, d[0] if np.ndim(d) == 2 else d)
        return self.y_norm(z, d, z_c)


class Rayleigh:
    """phi_{1,0}, phi_{2,0}, Rayleigh Green kernels and solvers for one (alpha, c)."""

    def __init__(self, params, zmax=None):
        self.params = params
        p = params
        if abs(p.c.imag) < 1e-3 * p.nu ** 0.25:
            raise RayleighPreconditionError("|Im c| too small to resolve the critical layer on the real axis")
        self.zmax = float(zmax if zmax is not None else p.Z_max)
        self.width = layer_width(p.z_c, hmax=0.5, ratio=0.25)
        bp = breakpoints_from_width(0.0, self.zmax, self.width, forced=self._forced())
        prof, c = p.profile, p.c
        self._K = PiecewiseAntiderivative(bp, lambda t: (prof.eval(t.astype(complex)) - c) ** -2)
        self.K0 = 1.0 / (c * p.U1_0)

    def _forced(self):
        zc = self.params.z_c
        return [zc.real + k * abs(zc.imag) for k in (-10, -3, -1, 0, 1, 3, 10)]

    # -- basic solutions ------------------------------------------------------
    def K(self, z):
        return self._K(np.asarray(z, float)) + self.K0

    def phi1(self, z, nder=3):
        z = np.atleast_1d(np.asarray(z, float))
        u = self.params.profile.jet(z.astype(complex), nder - 1).derivatives(nder - 1)
        u[0] = u[0] - self.params.c
        return ModeFunction(z, u, None, label="phi_10")

    def phi2(self, z, nder=3):
        """phi_{2,0} and derivatives: phi2^{(k)} = sum_j C(k,j) U-c^{(j)} K^{(k-j)}."""
        z = np.atleast_1d(np.asarray(z, float))
        p = self.params
        uj = p.profile.jet(z.astype(complex), max(nder - 1, 1))
        umc = uj - p.c
        # K jet: K, then d/dz K = (U-c)^{-2}
        if nder > 1:
            inv2 = (umc * umc).reciprocal().truncate(nder - 2)
            kt = np.zeros((nder, z.size), complex)
            kt[0] = self.K(z)
            kt[1:] = inv2.t / np.arange(1, nder)[:, None]
            Kj = Jet(kt)
        else:
            Kj = Jet(self.K(z)[None, :])
        ph = umc.truncate(nder - 1) * Kj
        return ModeFunction(z, ph.derivatives(nder - 1), None, label="phi_20")

    def phi_alpha(self, j, z, nder=3):
        """phi_{j,alpha} = phi_{j,0} exp(-alpha z)."""
        base = self.phi1(z, nder) if j == 1 else self.phi2(z, nder)
        out = Jet.from_derivatives(base.d) * _expjet(-self.params.alpha, nder - 1, base.z)
        return ModeFunction(base.z, out.derivatives(nder - 1), None, label=f"phi_{j},alpha")

    def wronskian(self, z):
        a = self.phi1(z, 2)
        b = self.phi2(z, 2)
        return b.d[1] * a.d[0] - b.d[0] * a.d[1]

    # -- Green kernels --------------------------------------------------------
    def green(self, x, z, alpha_mode=0):
        """G_{R,0}(x, z) (alpha_mode=0) or G_{R,alpha}(x, z), scalar x, array z."""
        x = float(x)
        z = np.atleast_1d(np.asarray(z, float))
        p = self.params
        ux = p.profile.eval(complex(x)) - p.c
        p1x, p2x = self.phi1([x], 1).d[0, 0], self.phi2([x], 1).d[0, 0]
        p1z, p2z = self.phi1(z, 1).d[0], self.phi2(z, 1).d[0]
        G = np.where(x < z, p1z * p2x, p1x * p2z) * (-1.0 / ux)
        if alpha_mode:
            G = G * np.exp(-p.alpha * (z - x))
        return G

    # -- solvers ----------------------------------------------------------------
    def _rule(self, z, lo=0.0, hi=None, extra=()):
        hi = self.zmax if hi is None else hi
        forced = np.concatenate([self._forced(), np.asarray(z, float), np.asarray(extra, float)])
        return PanelRule(breakpoints_from_width(lo, hi, self.width, forced=forced), 16)

    def solve(self, f, z, alpha_mode=1, anchor="inf", fprime=None, nder=3, fjet=None):
        """RaySolver_alpha(f) (alpha_mode=1) or RaySolver_0(f) at the points z.

        ``f`` is a vectorized callable; ``fprime`` (optional) its derivative,
        needed only for nder = 4; alternatively ``fjet(z, order)`` returns a
        Jet of f and allows any nder.  ``anchor="inf"`` uses I_2 = int_z^inf F;
        ``anchor="zero"`` uses I_2 = -int_0^z F, which is the admissible choice
        for forcings that do not decay faster than exp(-alpha z) (the output
        then vanishes at z = 0).  Returned derivatives beyond the first come
        from the Rayleigh equation, never from differencing.
        """
        z = np.atleast_1d(np.asarray(z, float))
        p = self.params
        al = p.alpha if alpha_mode else 0.0
        rule = self._rule(z)
        x = rule.nodes
        Fx = np.exp(al * x) * np.asarray(f(x), complex)
        I1b = rule.cumulative(self.K(x) * Fx)
        if anchor == "inf":
            I2b = rule.tail(Fx)
        elif anchor == "zero":
            I2b = -rule.cumulative(Fx)
        else:
            raise ValueError("anchor must be 'inf' or 'zero'")
        idx = rule.index_of(z)
        I1, I2 = I1b[idx], I2b[idx]
        core = self._Y_from(z, I1, I2, f, fprime, al, nder, fjet)
        core.meta["anchor"] = anchor
        return core

    def _Y_from(self, z, I1, I2, f, fprime, al, nder, fjet=None):
        p = self.params
        if nder > 4 and fjet is None:
            raise ValueError("fjet is required beyond the third derivative")
        p1 = self.phi1(z, 2)
        p2 = self.phi2(z, 2)
        Y = -p1.d[0] * I1 - p2.d[0] * I2
        Yp = -p1.d[1] * I1 - p2.d[1] * I2
        order = nder - 1
        if order <= 1:
            Yj = Jet(np.stack([Y, Yp])[: order + 1])
        else:
            m = order - 2
            uj = p.profile.jet(z.astype(complex), order)
            a = (uj - p.c).truncate(m)
            b = uj.deriv(2).truncate(m)
            if fjet is not None:
                fj = fjet(z, m)
            else:
                ft = np.zeros((m + 1, z.size), complex)
                ft[0] = np.asarray(f(z), complex)
                if m >= 1:
                    if fprime is None:
                        raise RayleighPreconditionError("fprime is required for third derivatives")
                    ft[1] = np.asarray(fprime(z), complex)
                fj = Jet(ft)
            Fj = fj * _expjet(al, m, z)
            Yj = ode_jet(Y, Yp, a, b, Fj, order)
        out = (Yj * _expjet(-al, order, z)).derivatives(order)
        mf = ModeFunction(z, out, None, label="RaySolver")
        mf.meta["Y0"] = Y
        mf.meta["Y0p"] = Yp
        return mf

    def err(self, f, z, anchor="inf"):
        """Err_{R,alpha}(f) = -2 alpha (U - c) exp(-alpha z) Y'."""
        z = np.atleast_1d(np.asarray(z, float))
        p = self.params
        r = self.solve(f, z, 1, anchor, nder=2)
        u = p.profile.eval(z.astype(complex)) - p.c
        e = -2.0 * p.alpha * u * np.exp(-p.alpha * z) * r.meta["Y0p"]
        return ModeFunction(z, e[None, :], None, label="Err_R")

    def ray_apply(self, mode: ModeFunction, alpha=None):
        """Ray_alpha applied to a mode with stored derivatives 0..2."""
        p = self.params
        al = p.alpha if alpha is None else alpha
        u = p.profile.jet(mode.z.astype(complex), 2).derivatives(2)
        d = mode.values(0), mode.values(2)
        return (u[0] - p.c) * (d[1] - al ** 2 * d[0]) - u[2] * d[0]


def _expjet(a, order, z):
    """Jet of exp(a z) at the points z."""
    z = np.asarray(z, float)
    k = np.arange(order + 1)
    coef = np.array([a ** kk / factorial(kk) for kk in k])
    return Jet(coef[:, None] * np.exp(a * z)[None, :])


def phi_10(params, z, nder=3, ray=None):
    return (ray or Rayleigh(params)).phi1(z, nder)


def phi_20(params, z, nder=3, ray=None):
    return (ray or Rayleigh(params)).phi2(z, nder)


def green_R(params, alpha_mode, x, z, ray=None):
    return (ray or Rayleigh(params)).green(x, z, alpha_mode)


def ray_solver(params, alpha_mode, f, z, ray=None, **kw):
    return (ray or Rayleigh(params)).solve(f, z, alpha_mode, **kw)


def err_R(params, f, z, ray=None, **kw):
    return (ray or Rayleigh(params)).err(f, z, **kw)
