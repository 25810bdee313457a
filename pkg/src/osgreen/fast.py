"""Fast (viscous) approximate solutions phi_{f,+-}.

The second derivative psi = phi'' of a fast mode solves the Airy-type
equation A psi = -eps psi'' + (U - c) psi ~ 0 approximately:

* below the matching point sigma1, psi is a combination of the modulated
  Airy functions Ai~ = f Ai(zeta_L), Ci~ = f Ci(zeta_L);
* above sigma1, psi is a WKB solution exp(S), S' = s, where s solves the
  Riccati equation s' + s^2 = (U - c)/eps through the expansion

      s_0 = +-mu_f,  s_1 = -U' / (4 (U - c)),
      s_n = -(s_{n-1}' + sum_{j=1}^{n-1} s_j s_{n-j}) / (2 s_0),  n >= 2.

The decaying mode (sign -1) is psi_- = exp(S_-) above sigma1, glued in value
and slope to a Ai~ + b Ci~ below, and scaled so that its Ai~ coefficient is
gamma^2.  The growing mode (sign +1) is gamma^2 Ci~ below sigma1 and the WKB
combination A exp(S_+) + B exp(S_-) above.

phi is the exact double primitive of psi: for the decaying mode
phi_-(z) = int_z^inf (t - z) psi_-(t) dt, for the growing mode the forward
double primitive from z = 0 started at the leading-order values of the
decaying-direction primitives Ci(2, .), Ci(1, .).  Values are carried as a
mantissa times exp(l(z)) with l = Re S + log|coefficient| above sigma1 and
l = 0 below, so the modes can be evaluated across the whole half line.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import jet as J
from . import kernels
from .jet import Jet
from .langer import LangerMap
from .modefunc import ModeFunction
from .quadrature import (PanelRule, PiecewiseAntiderivative, breakpoints_from_width,
                         legendre_coefficients, legendre_eval)
from .special import ci_all

__all__ = ["WKBPhase", "wkb_build", "FastModes", "MatchingError", "match_at_sigma1", "h_series"]


class MatchingError(RuntimeError):
    """Singular matching system at sigma1 or invalid WKB domain."""


@dataclass
class WKBPhase:
    """Log-derivative expansion s = sum_{n<=M} s_n of a WKB solution.

    In the exponent convention psi = exp(theta / sqrt(eps)) with
    theta = sum eps^{n/2} theta_n one has theta_n' = eps^{(1-n)/2} s_n, so
    that theta_0'^2 = U - c.
    """

    params: object
    sign: int
    order_M: int

    def s_terms(self, z, jet_order=0):
        """List of jets [s_0, ..., s_M] (each of order ``jet_order``)."""
        p = self.params
        M = self.order_M
        K = jet_order + M + 1
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        u = p.profile.jet(z, K)
        umc = u - p.c
        q = umc / p.eps
        mu0 = np.sqrt(q.value)
        mu0 = np.where(mu0.real < 0, -mu0, mu0)
        s = [J.sqrt(q, value=mu0) * float(self.sign)]
        if M >= 1:
            s.append(-(u.deriv(1) / umc.truncate(K - 1)) * 0.25)
        for n in range(2, M + 1):
            acc = s[n - 1].deriv(1)
            for j in range(1, n):
                acc = acc + s[j] * s[n - j]
            s.append(acc / (s[0] * -2.0))
        return [t.truncate(jet_order) for t in s]

    def s_total(self, z, jet_order=0) -> Jet:
        terms = self.s_terms(z, jet_order)
        tot = terms[0]
        for t in terms[1:]:
            tot = tot + t
        return tot

    def theta_prime(self, z):
        """theta_n'(z), n = 0..M, in the eps^{1/2}-expansion convention."""
        eps = self.params.eps
        return [t.value * eps ** ((1 - n) / 2.0) for n, t in enumerate(self.s_terms(z))]

    def riccati_residual(self, z):
        """s' + s^2 - (U - c)/eps for the truncated expansion."""
        s = self.s_total(z, 1)
        p = self.params
        u = p.profile.eval(np.atleast_1d(np.asarray(z, dtype=complex)))
        return s.t[1] + s.value ** 2 - (u - p.c) / p.eps


def wkb_build(params, sign, M=None):
    """WKB phase for psi_{sign}; checks that U - c stays away from zero."""
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    M = params.wkb_order if M is None else M
    u1 = params.profile.eval(params.sigma1)
    if abs(u1 - params.c) < 0.25 * abs(u1):
        raise MatchingError("|U - c| too small at sigma1; increase sigma1")
    return WKBPhase(params, sign, M)


def h_series(s: Jet, H: int) -> Jet:
    """Amplitude h with (h e^S)'' = e^S up to O((s'/s^2)^{H+1}).

    Uses h_0 = 1/(s' + s^2) and h_k = -(h_{k-1}'' + 2 h_{k-1}' s)/(s' + s^2);
    the jet order drops by 2 per term.
    """
    n0 = s.order - 1
    D = s.deriv(1) + s.truncate(n0) * s.truncate(n0)
    h = D.reciprocal()
    hk = h
    for _ in range(H):
        d1 = hk.deriv(1)
        d2 = d1.deriv(1)
        n = d2.order
        hk = -(d2 + d1.truncate(n) * s.truncate(n) * 2.0) / D.truncate(n)
        h = h.truncate(n) + hk
    return h


def match_at_sigma1(params, langer: LangerMap, sign, wkb=None):
    """(a, b) with a Ai~/Ai~(s1) + b Ci~/Ci~(s1) matching exp(S_sign) at sigma1."""
    s1 = params.sigma1
    wkb = wkb or wkb_build(params, sign)
    s = wkb.s_total([s1]).value[0]
    ai = langer.tilde("ai", [s1], 1).t[:, 0]
    ci = langer.tilde("ci", [s1], 1).t[:, 0]
    la, lc = ai[1] / ai[0], ci[1] / ci[0]
    if abs(lc - la) < 1e-12 * (abs(la) + abs(lc)):
        raise MatchingError("singular matching system at sigma1")
    b = (s - la) / (lc - la)
    return complex(1.0 - b), complex(b)


class FastModes:
    """Builder for phi_{f,-} (sign=-1, decaying) and phi_{f,+} (sign=+1)."""

    tail_e_folds = 40.0

    def __init__(self, params, langer: LangerMap | None = None, M=None):
        self.params = params
        self.langer = langer or LangerMap(params)
        self.M = params.wkb_order if M is None else M
        self.s1 = float(params.sigma1)
        self.wkb = {sg: wkb_build(params, sg, self.M) for sg in (-1, +1)}
        self._S = {}
        self._setup_matching()

    # -- WKB phase ---------------------------------------------------------------
    def _S_of(self, sign, z):
        """S_sign(z) = int_{sigma1}^z s_sign for z >= sigma1."""
        zmax = float(np.max(z)) if np.size(z) else self.s1
        F = self._S.get(sign)
        if F is None or F.rule.breaks[-1] < zmax:
            top = max(zmax, 2.0 * (F.rule.breaks[-1] if F is not None else self.s1 + 1.0))
            xr = self.params.z_c.real
            width = lambda t: np.clip(0.25 * (t - xr), 0.01, 0.25)
            bp = breakpoints_from_width(self.s1, top, width)
            wk = self.wkb[sign]
            F = PiecewiseAntiderivative(bp, lambda t: wk.s_total(t, 0).value)
            self._S[sign] = F
        return F(z)

    def _setup_matching(self):
        s1 = self.s1
        lm = self.langer
        gam2 = self.params.gamma ** 2
        ai = lm.tilde("ai", [s1], 1).t[:, 0]
        ci = lm.tilde("ci", [s1], 1).t[:, 0]
        self.ai_s1, self.ci_s1 = ai, ci
        sm = self.wkb[-1].s_total([s1]).value[0]
        sp = self.wkb[+1].s_total([s1]).value[0]
        self.s_minus_s1, self.s_plus_s1 = sm, sp
        a, b = match_at_sigma1(self.params, lm, -1, self.wkb[-1])
        self.a_minus, self.b_minus = a, b
        self.N_minus = gam2 * ai[0] / a
        self.cA_minus = gam2
        self.cC_minus = gam2 * (b / a) * ai[0] / ci[0]
        # growing mode above sigma1: A e^{S+} + B e^{S-} matching gamma^2 Ci~
        B = gam2 * (ci[1] - sp * ci[0]) / (sm - sp)
        A = gam2 * ci[0] - B
        self.A_plus, self.B_plus = complex(A), complex(B)
        self.a_plus, self.b_plus = match_at_sigma1(self.params, lm, +1, self.wkb[+1])

    # -- psi -----------------------------------------------------------------------
    def _psi_below(self, z, sign, order):
        lm = self.langer
        if sign < 0:
            return lm.tilde("ai", z, order) * self.cA_minus + lm.tilde("ci", z, order) * self.cC_minus
        return lm.tilde("ci", z, order) * self.params.gamma ** 2

    def _psi_above(self, z, sign, nder):
        comps = [(sign, self.N_minus if sign < 0 else self.A_plus)]
        if sign > 0:
            comps.append((-1, self.B_plus))
        parts = []
        for sg, coef in comps:
            s = self.wkb[sg].s_total(z, max(nder - 2, 0))
            S = self._S_of(sg, z)
            Sj = np.zeros((nder, z.size), complex)
            Sj[0] = 1j * S.imag
            if nder > 1:
                Sj[1:] = s.t[: nder - 1] / np.arange(1, nder)[:, None]
            E = J.exp(Jet(Sj)) * (coef / abs(coef))
            parts.append((E.derivatives(nder - 1), S.real + np.log(abs(coef))))
        if len(parts) == 1:
            return parts[0]
        (d1, l1), (d2, l2) = parts
        ls = np.maximum(l1, l2)
        d = d1 * np.exp(l1 - ls) + d2 * np.exp(np.maximum(l2 - ls, -745.0))
        return d, ls

    def psi(self, z, sign, nder=2) -> ModeFunction:
        """psi_{sign} = phi_{f,sign}'' and its first nder-1 derivatives."""
        z = np.atleast_1d(np.asarray(z, float))
        out = np.zeros((nder, z.size), complex)
        ls = np.zeros(z.size)
        lo = z < self.s1
        if lo.any():
            out[:, lo] = self._psi_below(z[lo], sign, nder - 1).derivatives(nder - 1)
        hi = ~lo
        if hi.any():
            out[:, hi], ls[hi] = self._psi_above(z[hi], sign, nder)
        return ModeFunction(z, out, ls, label="psi_+" if sign > 0 else "psi_-")

    # -- phi -------------------------------------------------------------------------
    def _breaks(self, zq, ztop):
        p = self.params
        gam = abs(p.gamma)

        def width(t):
            mu = np.abs(p.mu_f(t))
            below = np.minimum(0.05, 2.0 / np.maximum(mu, gam))
            above = np.minimum(0.25, 6.0 / mu)
            return np.where(t < self.s1, below, above)

        forced = np.concatenate([np.asarray(zq, float), [self.s1]])
        return breakpoints_from_width(0.0, max(ztop, self.s1), width, forced=forced)

    def _initial_growing(self):
        """Leading-order (phi, phi') of the growing mode at z = 0."""
        zj = self.langer.zeta([0.0], 1)
        z0, zp = zj.t[0, 0], zj.t[1, 0]
        f0 = self.langer.amplitude([0.0], 0).value[0]
        _, _, c1, c2 = ci_all(z0)
        g2 = self.params.gamma ** 2
        return g2 * f0 * c2 / zp ** 2, g2 * f0 * c1 / zp

    def phi(self, z, sign, nder=4) -> ModeFunction:
        """phi_{f,sign} with derivatives 0..nder-1 at the points z >= 0."""
        z = np.atleast_1d(np.asarray(z, float))
        if np.any(z < 0):
            raise ValueError("fast modes are defined for z >= 0")
        p = self.params
        zmax = float(z.max()) if z.size else 0.0
        if sign < 0:
            rate = np.real(p.mu_f(max(zmax, self.s1)))
            ztop = max(zmax, self.s1) + self.tail_e_folds / rate
        else:
            ztop = max(zmax, self.s1)
        # query points are not forced as breaks (only the endpoints are): inside
        # a panel the double primitive is continued with the exact integrals of
        # the panel's Legendre interpolant of psi
        zq_forced = [zmax] if z.size else []
        rule = PanelRule(self._breaks(zq_forced, ztop), 16)
        br = rule.breaks
        nodes = self.psi(rule.nodes, sign, 1)
        lb = self.psi(br, sign, 1).logscale
        npan, k = rule.npanel, rule.order
        psi_n = nodes.d[0].reshape(npan, k)
        ln = nodes.logscale.reshape(npan, k)
        w = rule.weights.reshape(npan, k)
        t = rule.nodes.reshape(npan, k)
        # panel reference scale: right break for the decaying mode, left for the growing one
        ref = lb[1:] if sign < 0 else lb[:-1]
        sc = np.exp(np.minimum(ln - ref[:, None], 700.0))
        coef = legendre_coefficients(psi_n * sc)
        half = 0.5 * rule.h
        lbnd = 1 if sign < 0 else -1
        I1 = np.polynomial.legendre.legint(coef, lbnd=lbnd, axis=0) * half[None, :]
        I2 = np.polynomial.legendre.legint(I1, lbnd=lbnd, axis=0) * half[None, :]
        if sign < 0:
            sc = np.exp(np.minimum(ln - lb[:-1, None], 700.0))
            f = psi_n * sc * w
            D = f.sum(axis=1)
            M = (f * (t - br[:-1, None])).sum(axis=1)
            r = np.exp(np.minimum(lb[1:] - lb[:-1], 700.0))
            phi_b, dphi_b = kernels.dprim_backward(rule.h, r, D, M, 0j, 0j)
        else:
            sc = np.exp(np.minimum(ln - lb[1:, None], 700.0))
            f = psi_n * sc * w
            D = f.sum(axis=1)
            N = (f * (br[1:, None] - t)).sum(axis=1)
            r = np.exp(np.minimum(lb[:-1] - lb[1:], 700.0))
            f0, f1 = self._initial_growing()
            phi_b, dphi_b = kernels.dprim_forward(rule.h, r, D, N, f0, f1)
        j = np.clip(np.searchsorted(br, z, side="right") - 1, 0, npan - 1)
        x = 2.0 * (z - br[j]) / rule.h[j] - 1.0
        i1 = legendre_eval(I1, j, x)
        i2 = legendre_eval(I2, j, x)
        anchor = j + 1 if sign < 0 else j
        out = np.zeros((nder, z.size), complex)
        out[0] = phi_b[anchor] + (z - br[anchor]) * dphi_b[anchor] + i2
        if nder > 1:
            out[1] = dphi_b[anchor] + i1
        # report everything in the pointwise log-scale of psi (shared with psi)
        ps = self.psi(z, sign, max(nder - 2, 1))
        out[:2] *= np.exp(np.clip(lb[anchor] - ps.logscale, -745.0, 700.0))[None, :]
        if nder > 2:
            out[2:] = ps.d
        mf = ModeFunction(z, out, ps.logscale, label="phi_f+" if sign > 0 else "phi_f-")
        mf.tail_rate = complex(sign * np.sqrt((p.profile.U_plus - p.c) / p.eps))
        if mf.tail_rate.real * sign < 0:
            mf.tail_rate = -mf.tail_rate
        return mf

    # -- diagnostics -----------------------------------------------------------------
    def glue_mismatch(self, sign):
        """Relative jump of psi' / psi across sigma1 (the value is continuous)."""
        s1 = self.s1
        below = self._psi_below([s1], sign, 1).derivatives(1)[:, 0]
        d, _ = self._psi_above(np.array([s1]), sign, 3)
        lb, la = below[1] / below[0], d[1, 0] / d[0, 0]
        return abs(la - lb) / abs(lb)

    def airy_residual(self, z, sign):
        """Relative residual |A psi| / (|eps psi''| + |(U - c) psi|)."""
        ps = self.psi(z, sign, 3)
        u = self.params.profile.eval(np.asarray(z, complex))
        a = -self.params.eps * ps.d[2]
        b = (u - self.params.c) * ps.d[0]
        return np.abs(a + b) / (np.abs(a) + np.abs(b))
