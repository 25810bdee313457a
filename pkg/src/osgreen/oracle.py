"""Direct numerical solution of the Orr-Sommerfeld problem (independent oracle).

The fourth-order equation is integrated as a first-order system for the
scaled state y = (phi, phi'/s, phi''/s^2, phi'''/s^3), s = |k_f| the far-field
fast rate, with Dormand-Prince 5(4) steps and Gram-Schmidt re-orthonormalization
of a two-dimensional solution subspace after every step:

* from the wall, the subspace phi(z0) = phi'(z0) = 0;
* from the truncation point z_t backwards, the decaying subspace spanned by
  the constant-coefficient modes exp(-alpha z) and exp(-k_f z),
  k_f = sqrt(alpha^2 + (U_+ - c)/eps).  z_t is where |U - U_+| has decayed
  to ``far_tol`` so this boundary condition is exact to that level.

Step sizes are laid out a priori as ``step_factor * min(1/max(|mu_f|, |gamma|), 1)``;
the embedded DOPRI error estimate of every step is recorded and returned.
No part of this module uses the asymptotic construction except the optional
normalization of the Evans determinant by the approximate modes.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .modefunc import ModeFunction
from .quadrature import PiecewiseAntiderivative, breakpoints_from_width

__all__ = [
    "OracleError",
    "EigenvalueError",
    "StiffnessError",
    "DirectSolver",
    "StiffBVPSolution",
    "direct_green",
    "direct_evans",
    "muller",
    "find_eigenvalue",
    "compare",
    "constant_coefficient_green",
]

_DP_C = np.array([0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0])


class OracleError(RuntimeError):
    """Direct solver failure."""


class EigenvalueError(OracleError):
    """The boundary and decay subspaces (nearly) intersect: c is close to an eigenvalue."""

    def __init__(self, msg, residual):
        super().__init__(msg)
        self.residual = residual


class StiffnessError(OracleError):
    """The step layout cannot resolve the fast scale."""


@dataclass
class StiffBVPSolution:
    """Orthonormal bases of the two solution subspaces on a common grid."""

    grid: np.ndarray
    QL: np.ndarray
    RL: np.ndarray
    QR: np.ndarray
    RR: np.ndarray
    errmax: float
    meta: dict = field(default_factory=dict)


def _mu(profile, nu, alpha, c, z):
    eps = nu / (1j * alpha)
    r = np.sqrt((np.asarray(profile.eval(np.asarray(z, complex))) - c) / eps)
    return np.where(r.real < 0, -r, r)


class DirectSolver:
    """Orthonormalized shooting for one (profile, nu, alpha, c)."""

    def __init__(self, profile, nu, alpha, c, z0=0.0, zt=None, step_factor=1.0 / 20.0,
                 far_tol=1e-14, max_steps=2_000_000):
        self.profile = profile
        self.nu = float(nu)
        self.alpha = float(alpha)
        self.c = complex(c)
        self.eps = self.nu / (1j * self.alpha)
        self.z0 = float(z0)
        if zt is None:
            zt = self.z0 + max(math.log(1.0 / far_tol) / profile.decay_rate, 1.0)
        self.zt = float(zt)
        self.step_factor = float(step_factor)
        self.max_steps = max_steps
        up = profile.U_plus
        self.kf = cmath.sqrt(self.alpha ** 2 + (up - self.c) / self.eps)
        if self.kf.real < 0:
            self.kf = -self.kf
        self.s = abs(self.kf)
        u1 = abs(complex(profile.eval(0.0, 1)))
        self.gam = (self.alpha * u1 / self.nu) ** (1.0 / 3.0)

    @classmethod
    def from_params(cls, params, **kw):
        return cls(params.profile, params.nu, params.alpha, params.c, **kw)

    # -- grid and coefficients ---------------------------------------------------
    def grid(self, forced=()):
        forced = np.asarray(forced, float)
        forced = forced[(forced > self.z0) & (forced < self.zt)]
        sf = self.step_factor

        def width(t):
            mu = np.abs(_mu(self.profile, self.nu, self.alpha, self.c, t))
            return sf * np.minimum(1.0 / np.maximum(mu, self.gam), 1.0)

        g = breakpoints_from_width(self.z0, self.zt, width, forced=forced, nsample=20000)
        if g.size - 1 > self.max_steps:
            raise StiffnessError(f"{g.size - 1} steps exceed max_steps = {self.max_steps}")
        return g

    def _coeffs(self, g):
        h = np.diff(g)
        zs = g[:-1, None] + h[:, None] * _DP_C[None, :]
        jet = self.profile.jet(zs.ravel().astype(complex), 2).t
        u = jet[0].reshape(zs.shape)
        upp = 2.0 * jet[2].reshape(zs.shape)
        return h, (u - self.c) / self.eps, upp / self.eps

    def _far_vectors(self):
        s = self.s
        out = []
        for k in (-self.alpha, -self.kf):
            out.append(np.array([1.0, k / s, (k / s) ** 2, (k / s) ** 3], complex))
        return np.stack(out, axis=1)

    # -- sweeps ---------------------------------------------------------------------
    def sweep_left(self, g):
        h, a, b = self._coeffs(g)
        Y0 = np.zeros((4, 2), complex)
        Y0[2, 0] = 1.0
        Y0[3, 1] = 1.0
        Q, R, err, R0 = kernels.orr_dopri_sweep(h, a, b, self.s, self.alpha ** 2, Y0)
        return Q, R, err

    def sweep_right(self, g, Y0=None):
        gr = g[::-1]
        h, a, b = self._coeffs(gr)
        Y0 = self._far_vectors() if Y0 is None else Y0
        Q, R, err, R0 = kernels.orr_dopri_sweep(h, a, b, self.s, self.alpha ** 2, Y0)
        # original order: Q[k] at g[k]; c_k = R[k] c_{k+1}
        return Q[::-1].copy(), R[::-1].copy(), err, R0

    def solve(self, forced=()) -> StiffBVPSolution:
        g = self.grid(forced)
        QL, RL, e1 = self.sweep_left(g)
        QR, RR, e2, R0 = self.sweep_right(g)
        return StiffBVPSolution(g, QL, RL, QR, RR, max(e1, e2), meta=dict(R0=R0, nsteps=g.size - 1))

    # -- Green function -------------------------------------------------------------
    def green_columns(self, sol: StiffBVPSolution, x, cond_max=1e10):
        """(G, dG/dz) on sol.grid for a source at x (a grid point)."""
        g = sol.grid
        m = int(np.argmin(np.abs(g - x)))
        if abs(g[m] - x) > 1e-12 * (1 + abs(x)):
            raise OracleError("source point must be a grid point")
        A = np.concatenate([sol.QR[m], -sol.QL[m]], axis=1)
        rhs = np.array([0, 0, 0, -1.0 / (self.eps * self.s ** 3)], complex)
        cond = np.linalg.cond(A)
        if cond > cond_max:
            raise EigenvalueError(f"subspaces nearly intersect (condition {cond:.2e})", cond)
        v = np.linalg.solve(A, rhs)
        cR = kernels.chain_solve(sol.RR, m, v[:2], +1)
        cL = kernels.chain_solve(sol.RL, m, v[2:], -1)
        Y = np.empty((g.size, 4), complex)
        Y[: m + 1] = np.einsum("kij,kj->ki", sol.QL[: m + 1], cL[: m + 1])
        Y[m + 1:] = np.einsum("kij,kj->ki", sol.QR[m + 1:], cR[m + 1:])
        # far-field amplitudes at z_t for the closed-form continuation
        far = np.linalg.lstsq(self._far_vectors(), Y[-1], rcond=None)[0]
        jump = sol.QR[m] @ v[:2] - sol.QL[m] @ v[2:]
        return Y, far, dict(cond=cond, jump=jump * self.s ** np.arange(4), m=m)

    def green_at(self, sol, x, z):
        """G and dG/dz at arbitrary points z (grid points or beyond z_t)."""
        z = np.atleast_1d(np.asarray(z, float))
        Y, far, info = self.green_columns(sol, x)
        g = sol.grid
        out = np.zeros((2, z.size), complex)
        inside = z <= self.zt
        if inside.any():
            idx = np.searchsorted(g, z[inside])
            idx = np.clip(idx, 0, g.size - 1)
            if np.any(np.abs(g[idx] - z[inside]) > 1e-12 * (1 + z[inside])):
                raise OracleError("evaluation points inside [z0, z_t] must be grid points")
            out[0, inside] = Y[idx, 0]
            out[1, inside] = Y[idx, 1] * self.s
        if (~inside).any():
            d = z[~inside] - self.zt
            es = np.exp(-self.alpha * d)
            ef = np.exp(-self.kf * d)
            out[0, ~inside] = far[0] * es + far[1] * ef
            out[1, ~inside] = -self.alpha * far[0] * es - self.kf * far[1] * ef
        return out, info

    def table(self, x_grid, z_grid):
        """G and dG/dz on x_grid x z_grid from one pair of sweeps."""
        x_grid = np.asarray(x_grid, float)
        z_grid = np.asarray(z_grid, float)
        sol = self.solve(np.concatenate([x_grid, z_grid]))
        G = np.zeros((x_grid.size, z_grid.size), complex)
        dG = np.zeros_like(G)
        jumps = np.zeros(x_grid.size)
        for i, x in enumerate(x_grid):
            out, info = self.green_at(sol, x, z_grid)
            G[i], dG[i] = out
            jumps[i] = abs(self.eps * info["jump"][3] + 1.0)
        return G, dG, dict(errmax=sol.errmax, nsteps=sol.meta["nsteps"], jump_errors=jumps)

    # -- Evans determinant ----------------------------------------------------------
    def evans(self, amplitudes=None):
        """W[Phi_s, Phi_f](z0) for the exact decaying solutions.

        ``amplitudes`` = (a_s, log_a_f) fixes Phi_s(z_t) = a_s v_alpha and
        Phi_f(z_t) = exp(log_a_f) v_f.  The default is analytic in c:
        a_s = (U_+ - c) exp(-alpha z_t) and log_a_f = -int_{z0}^{z_t} mu_f.
        """
        g = self.grid()
        QR, RR, err, R0 = self.sweep_right(g)
        if amplitudes is None:
            a_s = (self.profile.U_plus - self.c) * cmath.exp(-self.alpha * (self.zt - self.z0))
            log_af = -self.int_mu(self.zt)
        else:
            a_s, log_af = amplitudes
        logdet = np.sum(np.log(RR[:, 0, 0]) + np.log(RR[:, 1, 1]))
        logdet += cmath.log(R0[0, 0] * R0[1, 1])
        q = QR[0]
        d0 = q[0, 0] * q[1, 1] - q[0, 1] * q[1, 0]
        W = self.s * d0 * a_s * np.exp(logdet + log_af)
        return complex(W), dict(errmax=err, nsteps=g.size - 1)

    def int_mu(self, z):
        """int_{z0}^{z} mu_f along the real axis (principal branch, Re > 0)."""
        bp = breakpoints_from_width(self.z0, z, lambda t: np.clip(0.05 * (1.0 + t), 0.005, 0.5))
        F = PiecewiseAntiderivative(bp, lambda t: _mu(self.profile, self.nu, self.alpha, self.c, t))
        return complex(F(np.array([z]))[0])


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------
def direct_green(params, profile=None, x=0.5, z=None, step_factor=1.0 / 20.0) -> ModeFunction:
    """G(x, .) and dG/dz from the direct solver, as a ModeFunction in z."""
    prof = profile or params.profile
    ds = DirectSolver(prof, params.nu, params.alpha, params.c, step_factor=step_factor)
    z = np.linspace(0.0, params.Z_max, 2001) if z is None else np.asarray(z, float)
    sol = ds.solve(np.concatenate([[x], z]))
    out, info = ds.green_at(sol, x, z)
    mf = ModeFunction(z, out, None, label="G_direct")
    mf.meta.update(errmax=sol.errmax, cond=info["cond"], jump=info["jump"])
    return mf


def direct_evans(params, profile=None, normalize="modes", modes=None, step_factor=1.0 / 20.0):
    """Evans determinant of the exact problem.

    ``normalize="modes"`` scales the exact decaying solutions to the
    approximate phi_{s,-} and phi_{f,-} at z_t, so the result is directly
    comparable to ``green.evans``; ``"wkb"`` uses the analytic normalization
    of ``DirectSolver.evans`` (for root finding).
    """
    prof = profile or params.profile
    ds = DirectSolver(prof, params.nu, params.alpha, params.c, step_factor=step_factor)
    if normalize == "wkb":
        return ds.evans()[0]
    from .green import ModeSet

    modes = modes or ModeSet(params)
    zt = ds.zt
    s = modes.slow.phi_minus([zt], 1)
    f = modes.fast.phi([zt], -1, 1)
    amp = (complex(s.d[0, 0]), complex(np.log(f.d[0, 0]) + f.logscale[0]))
    return ds.evans(amp)[0]


def muller(f, x0, x1, x2, tol=1e-12, maxiter=60):
    """Muller's method for a complex root of f."""
    f0, f1, f2 = f(x0), f(x1), f(x2)
    for it in range(maxiter):
        h1, h2 = x1 - x0, x2 - x1
        d1, d2 = (f1 - f0) / h1, (f2 - f1) / h2
        a = (d2 - d1) / (h2 + h1)
        b = a * h2 + d2
        disc = cmath.sqrt(b * b - 4 * f2 * a)
        den = b + disc if abs(b + disc) >= abs(b - disc) else b - disc
        dx = -2 * f2 / den if den != 0 else 1e-3 * (1 + abs(x2))
        x3 = x2 + dx
        if abs(dx) <= tol * (1 + abs(x3)):
            return x3, it + 1
        x0, x1, x2 = x1, x2, x3
        f0, f1, f2 = f1, f2, f(x3)
    raise OracleError(f"Muller iteration did not converge (last step {abs(dx):.2e})")


def find_eigenvalue(profile, nu, alpha, c_seed, rel_step=1e-2, tol=1e-10, step_factor=1.0 / 20.0):
    """Zero c* of the (analytically normalized) direct Evans determinant near c_seed."""

    def f(c):
        return DirectSolver(profile, nu, alpha, c, step_factor=step_factor).evans()[0]

    d = rel_step * abs(c_seed)
    c, its = muller(f, c_seed - d, c_seed + d, c_seed, tol=tol)
    return c, dict(iterations=its, residual=abs(f(c)))


# ---------------------------------------------------------------------------
# comparison
# ---------------------------------------------------------------------------
def compare(params, green_app, green_direct, weights=None):
    """Envelope-weighted relative error between two Green tables.

    Both tables share x_grid and z_grid.  Each column G(x, .) is weighted by
    |eps mu_f(x)^2|, the inverse of the envelope prefactor, and the error is
    the ratio of weighted L2 norms over the whole table (trapezoid weights in z).
    """
    x, z = green_app.x_grid, green_app.z_grid
    if weights is None:
        from .green import trapezoid_weights

        weights = trapezoid_weights(z)
    wx = np.abs(params.eps * params.mu_f(x) ** 2)
    diff = (green_app.G - green_direct.G) * wx[:, None]
    ref = green_direct.G * wx[:, None]
    num = np.sqrt(np.sum(weights[None, :] * np.abs(diff) ** 2))
    den = np.sqrt(np.sum(weights[None, :] * np.abs(ref) ** 2))
    dnum = np.sqrt(np.sum(weights[None, :] * np.abs((green_app.dzG - green_direct.dzG) * wx[:, None]) ** 2))
    dden = np.sqrt(np.sum(weights[None, :] * np.abs(green_direct.dzG * wx[:, None]) ** 2))
    per_x = np.sqrt(np.sum(weights[None, :] * np.abs(green_app.G - green_direct.G) ** 2, axis=1)
                    / np.sum(weights[None, :] * np.abs(green_direct.G) ** 2, axis=1))
    bnd_app = np.abs(green_app.G[:, 0]) + np.abs(green_app.dzG[:, 0])
    bnd_dir = np.abs(green_direct.G[:, 0]) + np.abs(green_direct.dzG[:, 0])
    return dict(rel_error=float(num / den), rel_error_dz=float(dnum / dden), per_x=per_x.tolist(),
                boundary_app=float(bnd_app.max()), boundary_direct=float(bnd_dir.max()))


def constant_coefficient_green(alpha, kf, eps, a, x, z):
    """Green function of -eps(d^2 - alpha^2)^2 + (U_+ - c)(d^2 - alpha^2) on z > a.

    Conditions: G = dG = 0 at z = a, decay at infinity, continuity of
    G, G', G'' at x and [eps G'''] = -1.  Returns (G, dG/dz) at the points z.
    """
    z = np.asarray(z, float)
    # whole-line part A e^{-alpha|r|} + B e^{-kf|r|}: jumps of G' vanish, G''' jumps by -1/eps
    M = np.array([[alpha, kf], [alpha ** 3, kf ** 3]], complex)
    A, B = np.linalg.solve(M, [0.0, 1.0 / (2.0 * eps)])
    r = np.abs(z - x)
    sg = np.sign(z - x)
    G = A * np.exp(-alpha * r) + B * np.exp(-kf * r)
    dG = -sg * (alpha * A * np.exp(-alpha * r) + kf * B * np.exp(-kf * r))
    # boundary correction with decaying modes from a
    r0 = x - a
    g0 = A * np.exp(-alpha * r0) + B * np.exp(-kf * r0)
    d0 = alpha * A * np.exp(-alpha * r0) + kf * B * np.exp(-kf * r0)  # derivative at a (a < x)
    C = np.linalg.solve(np.array([[1, 1], [-alpha, -kf]], complex), [-g0, -d0])
    G = G + C[0] * np.exp(-alpha * (z - a)) + C[1] * np.exp(-kf * (z - a))
    dG = dG - alpha * C[0] * np.exp(-alpha * (z - a)) - kf * C[1] * np.exp(-kf * (z - a))
    return G, dG
