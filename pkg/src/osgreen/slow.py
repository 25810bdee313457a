"""Slow approximate Orr-Sommerfeld solutions phi_{s,+-}.

Decaying slow mode:
    psi_0 = exp(-alpha z)(U - c),  Ray_alpha(psi_0) = e_0 = -2 alpha (U - c) U' exp(-alpha z),
    psi_1 = -RaySolver_alpha(e_0),
    E = -eps (d^2 - alpha^2)^2 psi_1 = E_1 + E_2,
    psi_2 = -AirySolve(E_2),
    phi_{s,-} = psi_0 + psi_1 + psi_2.
Here E_2 = -2 eps N U'^2 / (U - c)^3 with N = (U - c)(d^2 - alpha^2) psi_1 is
the most singular part of E at the critical layer, kept inside the window
|z - Re z_c| <= 1e3 |Im z_c| (and z below the point where U'^2 has decayed
to 1e-14 U'(0)^2); E_1 is the remainder.  All derivatives of psi_1 come
from Taylor jets of the Rayleigh equation, never from differencing.

Growing slow mode:
    phi_{s,+} = phi_{2,alpha} + phi_3,  phi_3 = -RaySolver_alpha(e_1),
    e_1 = Ray_alpha(phi_{2,alpha}) = -2 alpha (U - c) phi_{2,0}' exp(-alpha z).
Because e_1 only decays like exp(-alpha z), the solver is anchored at z = 0
(I_2 = -int_0^z F), which gives phi_3(0) = 0.  With ``iterations`` > 1 the
Rayleigh remainder is reduced further by repeating the correction.
"""
from __future__ import annotations

import numpy as np

from . import jet as J
from .airysolve import AiryLayer
from .jet import Jet
from .modefunc import ModeFunction
from .rayleigh import Rayleigh, _expjet

__all__ = ["SlowModes", "build_psi0", "build_psi1", "split_E", "build_phi_s_minus", "build_phi_s_plus"]


class SlowModes:
    """Builder of psi_0, psi_1, psi_2, phi_3 and the slow modes for one (alpha, c)."""

    window_factor = 1.0e3

    def __init__(self, params, ray: Rayleigh | None = None, airy: AiryLayer | None = None):
        self.params = params
        self.ray = ray or Rayleigh(params)
        self._airy = airy
        p = params
        zc = p.z_c
        hi = zc.real + self.window_factor * abs(zc.imag)
        cut = 0.5 * np.log(1e14) / p.profile.decay_rate
        self.window = (max(0.0, zc.real - self.window_factor * abs(zc.imag)), min(hi, cut, p.Z_max))

    @property
    def airy(self):
        if self._airy is None:
            self._airy = AiryLayer(self.params)
        return self._airy

    # -- psi_0, e_0 ----------------------------------------------------------------
    def psi0(self, z, nder=4):
        z = np.atleast_1d(np.asarray(z, float))
        p = self.params
        u = p.profile.jet(z.astype(complex), nder - 1) - p.c
        out = u * _expjet(-p.alpha, nder - 1, z)
        return ModeFunction(z, out.derivatives(nder - 1), None, label="psi0")

    def e0_jet(self, z, order):
        p = self.params
        z = np.atleast_1d(np.asarray(z, float))
        uj = p.profile.jet(z.astype(complex), order + 1)
        umc = (uj - p.c).truncate(order)
        return umc * uj.deriv(1) * _expjet(-p.alpha, order, z) * (-2.0 * p.alpha)

    def e0(self, z):
        return self.e0_jet(z, 0).value

    # -- psi_1 ---------------------------------------------------------------------
    def psi1(self, z, nder=5):
        """psi_1 = -RaySolver_alpha(e_0) with derivatives 0..nder-1."""
        r = self.ray.solve(self.e0, z, 1, "inf", nder=nder, fjet=self.e0_jet)
        out = ModeFunction(r.z, -r.d, None, label="psi1")
        out.meta["Y0p"] = r.meta["Y0p"]
        return out

    def E_parts(self, z):
        """(E, E_1, E_2) at the points z."""
        z = np.atleast_1d(np.asarray(z, float))
        p = self.params
        s1 = self.psi1(z, 5)
        d = s1.d
        al2 = p.alpha ** 2
        E = -p.eps * (d[4] - 2 * al2 * d[2] + al2 ** 2 * d[0])
        uj = p.profile.jet(z.astype(complex), 1).derivatives(1)
        umc = uj[0] - p.c
        N = umc * (d[2] - al2 * d[0])
        E2 = -2.0 * p.eps * N * uj[1] ** 2 / umc ** 3
        lo, hi = self.window
        E2 = np.where((z >= lo) & (z <= hi), E2, 0.0)
        return E, E - E2, E2

    def E2(self, z):
        return self.E_parts(z)[2]

    # -- psi_2 and phi_{s,-} -------------------------------------------------------
    def psi2(self, z, nder=5, check=True):
        lo, hi = self.window
        r = self.airy.solve(self.E2, z, support=(lo, hi), nder=nder, check=check)
        out = ModeFunction(r.z, -r.d, None, label="psi2")
        out.meta.update(r.meta)
        return out

    def phi_minus(self, z, nder=4, with_psi2=True, check=True):
        """phi_{s,-} = psi_0 + psi_1 + psi_2 with derivatives 0..nder-1."""
        z = np.atleast_1d(np.asarray(z, float))
        a = self.psi0(z, nder).d + self.psi1(z, nder).d
        if with_psi2:
            a = a + self.psi2(z, nder, check).d[:nder]
        return ModeFunction(z, a, None, label="phi_s-")

    def orr_residual_minus(self, z, with_psi2=True):
        """Orr_{alpha,c}(phi_{s,-}) computed exactly from jets and the AirySolve identities."""
        z = np.atleast_1d(np.asarray(z, float))
        p = self.params
        m = self.phi_minus(z, 5, with_psi2)
        return orr_apply(p, m)

    # -- phi_{s,+} -------------------------------------------------------------------
    def e1_jet(self, z, order):
        p = self.params
        z = np.atleast_1d(np.asarray(z, float))
        ph = self.ray.phi2(z, order + 2)
        dphi = Jet.from_derivatives(ph.d[1:])
        uj = p.profile.jet(z.astype(complex), order) - p.c
        return uj * dphi * _expjet(-p.alpha, order, z) * (-2.0 * p.alpha)

    def e1(self, z):
        return self.e1_jet(z, 0).value

    def phi3(self, z, nder=4):
        r = self.ray.solve(self.e1, z, 1, "zero", nder=nder, fjet=self.e1_jet)
        return ModeFunction(r.z, -r.d, None, label="phi3")

    def phi_plus(self, z, nder=4):
        """phi_{s,+} = phi_{2,alpha} + phi_3 with derivatives 0..nder-1."""
        z = np.atleast_1d(np.asarray(z, float))
        a = self.ray.phi_alpha(2, z, nder).d + self.phi3(z, nder).d
        return ModeFunction(z, a, None, label="phi_s+")

    def rayleigh_residual_plus(self, z):
        """Ray_alpha(phi_{s,+}) = -Err_{R,alpha}(e_1) (exact identity)."""
        z = np.atleast_1d(np.asarray(z, float))
        return -self.ray.err(self.e1, z, anchor="zero").d[0]

    def orr_residual_plus(self, z):
        z = np.atleast_1d(np.asarray(z, float))
        return orr_apply(self.params, self.phi_plus(z, 5))


def orr_apply(params, mode: ModeFunction):
    """Orr_{alpha,c} phi = -eps (d^2 - a^2)^2 phi + (U - c)(d^2 - a^2) phi - U'' phi (needs orders 0..4)."""
    p = params
    d = [mode.values(k) for k in range(5)]
    a2 = p.alpha ** 2
    u = p.profile.jet(mode.z.astype(complex), 2).derivatives(2)
    lap = d[2] - a2 * d[0]
    bil = d[4] - 2 * a2 * d[2] + a2 ** 2 * d[0]
    return -p.eps * bil + (u[0] - p.c) * lap - u[2] * d[0]


def build_psi0(params, z, slow=None):
    s = slow or SlowModes(params)
    return s.psi0(z), ModeFunction(np.asarray(z, float), s.e0_jet(z, 2).derivatives(2), None, label="e0")


def build_psi1(params, z, slow=None):
    return (slow or SlowModes(params)).psi1(z)


def split_E(params, z, slow=None):
    _, e1, e2 = (slow or SlowModes(params)).E_parts(z)
    z = np.asarray(z, float)
    return ModeFunction(z, e1[None], None, label="E1"), ModeFunction(z, e2[None], None, label="E2")


def build_phi_s_minus(params, z, slow=None, nder=4):
    return (slow or SlowModes(params)).phi_minus(z, nder)


def build_phi_s_plus(params, z, slow=None, nder=4):
    return (slow or SlowModes(params)).phi_plus(z, nder)
