"""Green function of the Airy-type operator A = -eps d^2 + (U - c).

With psi_+- the fast solutions of module ``fast`` (psi_- decaying at
infinity, psi_+ growing) and W = psi_+'/psi_+ - psi_-'/psi_-,

    G(x, y) = psi_+(y) / (eps W(x) psi_+(x))   for y < x,
              psi_-(y) / (eps W(x) psi_-(x))   for y > x,

so that A_y G(x, .) = delta_x up to the residual of psi_+-.  The primitives
G1(x, y) = int_y^inf G(x, t) dt and G2(x, y) = int_y^inf G1(x, t) dt are
anchored at +infinity and have closed forms in terms of phi_+- = the double
primitives of psi_+-.

``airy_solve(f)(y) = int G2(x, y) f(x) dx`` is evaluated as

    u = phi_-(y) P(y) + phi_+(y) Q(y)
        + int_y^inf R(x) [(a - b)(x) - (x - y)(a1 - b1)(x)] dx,

with R = f/(eps W), P = int_0^y R/psi_-, Q = int_y^inf R/psi_+,
a = phi_-/psi_-, a1 = phi_-'/psi_-, b = phi_+/psi_+, b1 = phi_+'/psi_+.
The products psi_- P and psi_+ Q are produced by first-order recurrences
panel by panel (compiled kernels), so no exponentially large number is
ever formed.
"""
from __future__ import annotations

import numpy as np

from . import kernels
from .fast import FastModes
from .modefunc import ModeFunction
from .quadrature import PanelRule, breakpoints_from_width

__all__ = ["AiryLayer", "airy_green", "airy_green_primitives", "airy_solve", "error_airy", "AiryAccuracyError"]


class AiryAccuracyError(RuntimeError):
    """Quadrature refinement did not converge or the tail is unresolved."""


def _clipexp(x):
    return np.exp(np.clip(x, -745.0, 700.0))


class AiryLayer:
    """Airy Green function and the AirySolve / ErrorAiry operators."""

    def __init__(self, params, fast: FastModes | None = None):
        self.params = params
        self.fast = fast or FastModes(params)

    # -- pointwise data ------------------------------------------------------
    def _data(self, pts):
        """psi, phi mantissas (orders 0..1) and log scales for both signs."""
        fm = self.fast
        out = {}
        for sg in (-1, +1):
            ps = fm.psi(pts, sg, 3)
            ph = fm.phi(pts, sg, 2)
            out[sg] = (ps, ph)
        return out

    def wronskian(self, x):
        """W(x) = psi_+'/psi_+ - psi_-'/psi_- (a log-derivative difference)."""
        x = np.atleast_1d(np.asarray(x, float))
        pp = self.fast.psi(x, +1, 2)
        pm = self.fast.psi(x, -1, 2)
        return pp.d[1] / pp.d[0] - pm.d[1] / pm.d[0]

    def green(self, x, y):
        """G^{Ai}(x, y) for a scalar source x and an array of y."""
        x = float(x)
        y = np.atleast_1d(np.asarray(y, float))
        eps = self.params.eps
        Wx = self.wronskian([x])[0]
        out = np.empty(y.size, complex)
        for sg, mask in ((+1, y < x), (-1, y >= x)):
            if mask.any():
                px = self.fast.psi([x], sg, 1)
                py = self.fast.psi(y[mask], sg, 1)
                out[mask] = py.d[0] / px.d[0, 0] * _clipexp(py.logscale - px.logscale[0])
        return out / (eps * Wx)

    def green_primitives(self, x, y):
        """(G1, G2)(x, y) with decay-at-infinity anchoring."""
        x = float(x)
        y = np.atleast_1d(np.asarray(y, float))
        eps = self.params.eps
        fm = self.fast
        Wx = self.wronskian([x])[0]
        rate = np.real(self.params.mu_f(max(x, fm.s1)))
        if rate * self.params.Z_max < 20.0:
            raise AiryAccuracyError("fast tail not resolved on [0, Z_max]")
        pmx = fm.psi([x], -1, 1)
        fmx = fm.phi([x], -1, 2)
        ppx = fm.psi([x], +1, 1)
        fpx = fm.phi([x], +1, 2)
        am = fmx.d[:, 0] / pmx.d[0, 0]  # (phi_-, phi_-') / psi_- at x
        bp = fpx.d[:, 0] / ppx.d[0, 0]
        G1 = np.empty(y.size, complex)
        G2 = np.empty(y.size, complex)
        hi = y >= x
        if hi.any():
            fy = fm.phi(y[hi], -1, 2)
            sc = _clipexp(fy.logscale - pmx.logscale[0]) / pmx.d[0, 0]
            G1[hi] = -fy.d[1] * sc
            G2[hi] = fy.d[0] * sc
        lo = ~hi
        if lo.any():
            yl = y[lo]
            fy = fm.phi(yl, +1, 2)
            sc = _clipexp(fy.logscale - ppx.logscale[0]) / ppx.d[0, 0]
            g1x, g2x = -am[1], am[0]
            G1[lo] = g1x + bp[1] - fy.d[1] * sc
            G2[lo] = g2x + (x - yl) * g1x + (x - yl) * bp[1] - bp[0] + fy.d[0] * sc
        return G1 / (eps * Wx), G2 / (eps * Wx)

    # -- AirySolve -------------------------------------------------------------
    def _breaks(self, lo, hi, zq, order_hint=1.0):
        p = self.params
        gam = abs(p.gamma)
        xr, xi = p.z_c.real, abs(p.z_c.imag)

        def width(t):
            mu = np.maximum(np.abs(p.mu_f(t)), gam)
            fast_w = 4.0 / mu
            lay = 0.25 * np.sqrt((t - xr) ** 2 + xi ** 2)
            return np.clip(np.minimum(fast_w, lay) * order_hint, 1e-6, 0.25)

        forced = [xr + k * xi for k in (-10, -3, -1, 0, 1, 3, 10)]
        forced = np.concatenate([forced, zq])
        return breakpoints_from_width(lo, hi, width, forced=forced)

    def _solve_core(self, f, zq, lo, hi, refine=1.0):
        p = self.params
        eps = p.eps
        inside = (zq >= lo) & (zq <= hi)
        br = self._breaks(lo, hi, np.unique(zq[inside]), refine)
        rule = PanelRule(br, 16)
        npan, k = rule.npanel, rule.order
        nodes = rule.nodes
        dm = self._data(np.concatenate([br, nodes]))
        nb = br.size
        psm, phm = dm[-1]
        psp, php = dm[+1]
        W = psp.d[1] / psp.d[0] - psm.d[1] / psm.d[0]
        fv = np.asarray(f(nodes), complex)
        R = fv / (eps * W[nb:])
        w = rule.weights
        # P^ = psi_- P : forward recurrence
        dmb, lmb = psm.d[0, :nb], psm.logscale[:nb]
        dmn, lmn = psm.d[0, nb:].reshape(npan, k), psm.logscale[nb:].reshape(npan, k)
        r = dmb[1:] / dmb[:-1] * _clipexp(lmb[1:] - lmb[:-1])
        cterm = (w.reshape(npan, k) * R.reshape(npan, k) * (dmb[1:, None] / dmn)
                 * _clipexp(lmb[1:, None] - lmn)).sum(axis=1)
        Phat = kernels.linrec_forward(r, cterm, 0j)
        # Q^ = psi_+ Q : backward recurrence
        dpb, lpb = psp.d[0, :nb], psp.logscale[:nb]
        dpn, lpn = psp.d[0, nb:].reshape(npan, k), psp.logscale[nb:].reshape(npan, k)
        s = dpb[:-1] / dpb[1:] * _clipexp(lpb[:-1] - lpb[1:])
        eterm = (w.reshape(npan, k) * R.reshape(npan, k) * (dpb[:-1, None] / dpn)
                 * _clipexp(lpb[:-1, None] - lpn)).sum(axis=1)
        Qhat = kernels.linrec_backward(s, eterm, 0j)
        # smooth tail integrals
        a = phm.d[0] / psm.d[0]
        a1 = phm.d[1] / psm.d[0]
        b = php.d[0] / psp.d[0]
        b1 = php.d[1] / psp.d[0]
        g0 = R * (a[nb:] - b[nb:])
        g1 = R * (a1[nb:] - b1[nb:])
        T0 = rule.tail(g0)
        T1 = rule.tail(g1)
        m1 = rule.panel_sums(g1 * (nodes - np.repeat(br[:-1], k)))
        contrib = rule.h * T1[1:] + m1
        V = np.concatenate([np.cumsum(contrib[::-1])[::-1], [0.0]])
        T = T0 - V
        return dict(br=br, Phat=Phat, Qhat=Qhat, a=a[:nb], a1=a1[:nb], b=b[:nb], b1=b1[:nb],
                    T=T, T1=T1, lm=lmb, lp=lpb, dm=dmb, dp=dpb,
                    lgm=psm.d[1, :nb] / dmb, lgp=psp.d[1, :nb] / dpb,
                    rm=-eps * psm.d[2, :nb] / dmb, rp=-eps * psp.d[2, :nb] / dpb)

    def _assemble(self, core, zq, f, nder, with_error=False):
        p = self.params
        br = core["br"]
        lo, hi = br[0], br[-1]
        nq = zq.size
        Ph = np.zeros(nq, complex)
        Qh = np.zeros(nq, complex)
        T = np.zeros(nq, complex)
        T1 = np.zeros(nq, complex)
        inside = (zq >= lo) & (zq <= hi)
        if inside.any():
            idx = PanelRule(br, 2).index_of(zq[inside])
            Ph[inside] = core["Phat"][idx]
            Qh[inside] = core["Qhat"][idx]
            T[inside] = core["T"][idx]
            T1[inside] = core["T1"][idx]
        above = zq > hi
        if above.any():
            ps = self.fast.psi(zq[above], -1, 1)
            Ph[above] = core["Phat"][-1] * ps.d[0] / core["dm"][-1] * _clipexp(ps.logscale - core["lm"][-1])
        below = zq < lo
        if below.any():
            ps = self.fast.psi(zq[below], +1, 1)
            Qh[below] = core["Qhat"][0] * ps.d[0] / core["dp"][0] * _clipexp(ps.logscale - core["lp"][0])
            T[below] = core["T"][0] - (lo - zq[below]) * core["T1"][0]
            T1[below] = core["T1"][0]
        dat = self._data(zq)
        psm, phm = dat[-1]
        psp, php = dat[+1]
        a, a1 = phm.d[0] / psm.d[0], phm.d[1] / psm.d[0]
        b, b1 = php.d[0] / psp.d[0], php.d[1] / psp.d[0]
        lgm, lgp = psm.d[1] / psm.d[0], psp.d[1] / psp.d[0]
        u = a * Ph + b * Qh + T
        du = a1 * Ph + b1 * Qh + T1
        v = Ph + Qh
        dv = lgm * Ph + lgp * Qh
        out = np.zeros((max(nder, 5), nq), complex)
        out[0], out[1], out[2], out[3] = u, du, v, dv
        if nder > 4:
            c2m, c2p = psm.d[2] / psm.d[0], psp.d[2] / psp.d[0]
            out[4] = c2m * Ph + c2p * Qh - np.asarray(f(zq), complex) / p.eps
        res = {"mode": ModeFunction(zq, out[:nder], None, label="AirySolve")}
        if with_error:
            rm = -p.eps * psm.d[2] / psm.d[0] + (p.profile.eval(zq.astype(complex)) - p.c)
            rp = -p.eps * psp.d[2] / psp.d[0] + (p.profile.eval(zq.astype(complex)) - p.c)
            res["error"] = rm * Ph + rp * Qh
        return res

    def solve(self, f, z, support=None, nder=4, check=True, rtol=1e-6):
        """AirySolve(f) = int G2(x, .) f(x) dx and derivatives at the points z.

        ``f`` is a vectorized callable of real x; ``support`` = (lo, hi)
        bounds the region where f is not negligible (default [0, Z_max]).
        Derivatives: order 2 equals int G f (the solution of A v = f).
        With ``check`` the panel layout is refined once and the two results
        must agree to ``rtol`` relative to their maximum.
        """
        z = np.atleast_1d(np.asarray(z, float))
        lo, hi = support if support is not None else (0.0, self.params.Z_max)
        lo = max(0.0, float(lo))
        core = self._solve_core(f, z, lo, hi)
        res = self._assemble(core, z, f, nder)["mode"]
        if check:
            core2 = self._solve_core(f, z, lo, hi, refine=0.5)
            res2 = self._assemble(core2, z, f, nder)["mode"]
            scale = np.abs(res2.d[:3]).max(axis=1) + 1e-300
            diff = (np.abs(res.d[:3] - res2.d[:3]).max(axis=1) / scale).max()
            res2.meta["refine_diff"] = float(diff)
            if diff > rtol:
                raise AiryAccuracyError(f"AirySolve refinement changed the result by {diff:.2e}")
            return res2
        return res

    def error(self, f, z, support=None):
        """ErrorAiry(f) = A(int G f) - f from the residuals of psi_+-."""
        z = np.atleast_1d(np.asarray(z, float))
        lo, hi = support if support is not None else (0.0, self.params.Z_max)
        core = self._solve_core(f, z, max(0.0, lo), hi)
        e = self._assemble(core, z, f, 4, with_error=True)["error"]
        return ModeFunction(z, e[None, :], None, label="ErrorAiry")


def airy_green(params, x, y, layer: AiryLayer | None = None):
    return (layer or AiryLayer(params)).green(x, y)


def airy_green_primitives(params, x, y, layer: AiryLayer | None = None):
    return (layer or AiryLayer(params)).green_primitives(x, y)


def airy_solve(params, f, z, support=None, layer: AiryLayer | None = None, **kw):
    return (layer or AiryLayer(params)).solve(f, z, support, **kw)


def error_airy(params, f, z, support=None, layer: AiryLayer | None = None):
    return (layer or AiryLayer(params)).error(f, z, support)
