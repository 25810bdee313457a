"""Approximate Orr-Sommerfeld Green function, Evans function and envelope fits.

For a source at z = x the interior Green function is

    G_i(x, z) = a_+ phi_{s,+}(z) + b_+ phi_{f,+}(z)     for z < x,
    G_i(x, z) = a_- phi_{s,-}(z) + b_- phi_{f,-}(z)     for z > x,

with G, dG, d^2G continuous at z = x and [eps d^3 G] = -1 (right limit minus
left limit).  The four conditions form the match matrix M whose row k is
divided by mu_f(x)^k and whose fast columns are divided by
F_+- = phi_{f,+-}''(x) / mu_f(x)^2, so every entry is O(1) even though the
fast modes themselves overflow double precision.  The boundary part

    G_b(x, z) = d_s phi_{s,-}(z) + d_f phi_{f,-}(z)

cancels G_i(x, 0) and dG_i(x, 0); its 2x2 matrix has determinant
W[phi_{s,-}, phi_{f,-}](0), the Evans function.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .modefunc import ModeFunction
from .quadrature import PiecewiseAntiderivative, breakpoints_from_width, gauss_legendre
from .slow import SlowModes, orr_apply
from .special import airy_all, tietjens

__all__ = [
    "GreenError",
    "NearEigenvalueError",
    "ProjectionError",
    "ModeSet",
    "MatchMatrix",
    "GreenTable",
    "BoundFit",
    "GreenAssembler",
    "default_x_grid",
    "default_z_grid",
    "evans",
    "evans_tietjens",
    "extract_P",
    "verify_bounds",
    "fit_envelope",
    "weak_delta",
    "bump",
]

MODE_KEYS = ("s-", "s+", "f-", "f+")


class GreenError(RuntimeError):
    """Assembly of the approximate Green function failed."""


class NearEigenvalueError(GreenError):
    """The interior or boundary system is (nearly) singular."""

    def __init__(self, msg, value):
        super().__init__(msg)
        self.value = value


class ProjectionError(GreenError):
    """phi_{s,-} is too small on the grid for the projection defining P."""


# ---------------------------------------------------------------------------
# mode evaluation
# ---------------------------------------------------------------------------
class ModeSet:
    """The four approximate modes for one (alpha, c), evaluated on demand."""

    def __init__(self, params, slow: SlowModes | None = None):
        self.params = params
        self.slow = slow or SlowModes(params)
        self.fast = self.slow.airy.fast

    def evaluate(self, z, nder=4) -> dict:
        """Dictionary of ModeFunctions (derivatives 0..nder-1) keyed by MODE_KEYS."""
        z = np.atleast_1d(np.asarray(z, float))
        return {
            "s-": self.slow.phi_minus(z, nder),
            "s+": self.slow.phi_plus(z, nder),
            "f-": self.fast.phi(z, -1, nder),
            "f+": self.fast.phi(z, +1, nder),
        }


def _pick(m: ModeFunction, idx):
    return ModeFunction(m.z[idx], m.d[:, idx], m.logscale[idx], m.tail_rate, m.label)


# ---------------------------------------------------------------------------
# interior matching
# ---------------------------------------------------------------------------
@dataclass
class MatchMatrix:
    """Renormalized 4x4 interior matching system at the source point x.

    Columns: (phi_{s,-}, phi_{s,+}, phi_{f,-}/F_-, phi_{f,+}/F_+); row k holds
    the k-th derivatives divided by mu_f(x)^k.  The unknown is
    v = (-a_-, a_+, -b~_-, b~_+) with b_+- = b~_+- / F_+- and the right-hand
    side is (0, 0, 0, 1/(eps mu_f(x)^3)).
    """

    x: float
    entries: np.ndarray
    mu: complex
    F_minus: complex  # mantissa of F_-; its log-scale is logF_minus
    F_plus: complex
    logF_minus: float
    logF_plus: float
    rhs: np.ndarray

    @property
    def A(self):
        return self.entries[:2, :2]

    @property
    def B(self):
        return self.entries[:2, 2:]

    @property
    def C(self):
        return self.entries[2:, :2]

    @property
    def D(self):
        return self.entries[2:, 2:]

    def condition(self):
        return float(np.linalg.cond(self.entries))

    def solve(self):
        return np.linalg.solve(self.entries, self.rhs)

    def block_solve(self, terms=3):
        """Approximate inverse through the block-triangular part M~ and N = M~^{-1}(M - M~).

        M^{-1} = (I + N)^{-1} M~^{-1} = sum_n (-N)^n M~^{-1}, truncated after
        ``terms`` terms.
        """
        Mt = self.entries.copy()
        Mt[2:, :2] = 0.0
        base = np.linalg.solve(Mt, self.rhs)
        N = np.linalg.solve(Mt, self.entries - Mt)
        out = np.zeros(4, complex)
        term = base
        for _ in range(terms):
            out = out + term
            term = -N @ term
        return out, float(np.linalg.norm(N, 2))

    def CAinv_norm(self):
        return float(np.linalg.norm(self.C @ np.linalg.inv(self.A), 2))


def build_match_matrix(params, at_x: dict, x: float) -> MatchMatrix:
    """MatchMatrix from mode derivatives (orders 0..3) at the single point x."""
    mu = complex(params.mu_f(x))
    scale = mu ** -np.arange(4)
    E = np.zeros((4, 4), complex)
    E[:, 0] = at_x["s-"].d[:4, 0] * scale
    E[:, 1] = at_x["s+"].d[:4, 0] * scale
    F = {}
    for col, key in ((2, "f-"), (3, "f+")):
        d = at_x[key].d[:4, 0]
        F[key] = d[2] / mu ** 2
        E[:, col] = d * scale / F[key]
    rhs = np.array([0, 0, 0, 1.0 / (params.eps * mu ** 3)], complex)
    return MatchMatrix(float(x), E, mu, F["f-"], F["f+"],
                       float(at_x["f-"].logscale[0]), float(at_x["f+"].logscale[0]), rhs)


# ---------------------------------------------------------------------------
# Evans function
# ---------------------------------------------------------------------------
def evans(params, modes: ModeSet | None = None, at0: dict | None = None) -> complex:
    """W[phi_{s,-}, phi_{f,-}](0) = phi_s phi_f' - phi_s' phi_f at the wall."""
    if at0 is None:
        modes = modes or ModeSet(params)
        s = modes.slow.phi_minus([0.0], 2)
        f = modes.fast.phi([0.0], -1, 2)
    else:
        s, f = at0["s-"], at0["f-"]
    sv, sd = s.values(0)[0], s.values(1)[0]
    fv, fd = f.values(0)[0], f.values(1)[0]
    return complex(sv * fd - sd * fv)


def evans_tietjens(params, corrected=True) -> complex:
    """Leading-order Evans value -(gamma c_w Ti(-gamma z_c) + U'(0)) Ai(2, -gamma z_c).

    With ``corrected`` the wall value of the slow mode is
    -c_w = -c + alpha U_+^2 / U'(0), i.e. psi_1(0) is kept; it is of the same
    order as c when alpha ~ nu^{1/4}, so dropping it (``corrected=False``,
    c_w = c) leaves an O(1) discrepancy.
    """
    arg = -params.gamma * params.z_c
    ti = complex(np.asarray(tietjens(np.array([arg])))[0])
    ai2 = complex(airy_all(np.array([arg]))[3][0])
    cw = params.c
    if corrected:
        cw = cw - params.alpha * params.profile.U_plus ** 2 / params.U1_0
    return -(params.gamma * cw * ti + params.U1_0) * ai2


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------
def default_x_grid(params, n_layer=4, n_outer=5):
    """Source points: multiples of nu^{1/4} plus a few O(1) points."""
    s = params.nu ** 0.25
    inner = s * np.array([0.5, 1.0, 2.0, 4.0])[:n_layer]
    outer = np.array([0.25, 0.5, 1.0, 2.0, 4.0])[:n_outer]
    return np.unique(np.concatenate([inner, outer]))


def default_z_grid(params, x_grid=(), per_wavelength=12, e_folds=12.0, zmax=None):
    """Observation grid on [0, Z_max].

    Geometric clustering at 0 and Re z_c on the critical-layer scale, a slow
    grid of width clip(0.05 (1 + z), 0.01, 1), and ``per_wavelength`` points
    per fast length 1/|mu_f| within ``e_folds`` fast e-foldings of 0 and of
    every source point.
    """
    p = params
    zmax = p.Z_max if zmax is None else zmax
    slow = breakpoints_from_width(0.0, zmax, lambda t: np.clip(0.05 * (1.0 + t), 0.01, 1.0))
    xi = abs(p.z_c.imag)
    xr = p.z_c.real
    layer = xr + xi * np.concatenate([-np.geomspace(0.05, 20, 24), [0.0], np.geomspace(0.05, 20, 24)])
    parts = [slow, layer, np.geomspace(1e-3 * p.nu ** 0.25, 1.0, 40), [0.0]]
    for x0 in np.concatenate([[0.0], np.asarray(x_grid, float)]):
        mu = abs(p.mu_f(x0))
        rate = float(np.real(p.mu_f(x0)))
        half = e_folds / rate
        n = int(np.ceil(2 * half * mu * per_wavelength))
        parts.append(np.linspace(x0 - half, x0 + half, n + 1))
    z = np.unique(np.concatenate(parts))
    z = z[(z >= 0.0) & (z <= zmax)]
    return z


def trapezoid_weights(z):
    z = np.asarray(z, float)
    w = np.zeros_like(z)
    dz = np.diff(z)
    w[:-1] += 0.5 * dz
    w[1:] += 0.5 * dz
    return w


# ---------------------------------------------------------------------------
# Green table
# ---------------------------------------------------------------------------
@dataclass
class GreenTable:
    """G(x, z) and dG/dz on a tensor grid, with P(x) and jump diagnostics."""

    x_grid: np.ndarray
    z_grid: np.ndarray
    G: np.ndarray
    dzG: np.ndarray
    P_coeff: np.ndarray = None
    jump_errors: np.ndarray = None
    continuity_errors: np.ndarray = None
    boundary_errors: np.ndarray = None
    coeffs: dict = field(default_factory=dict)
    phi_s_minus: ModeFunction = None
    meta: dict = field(default_factory=dict)

    def rows(self):
        """Iterate (x, z, G, dzG) over the table in row-major order."""
        for i, x in enumerate(self.x_grid):
            for j, z in enumerate(self.z_grid):
                yield x, z, self.G[i, j], self.dzG[i, j]


class GreenAssembler:
    """Builds G^{app} = G_i + G_b for one (alpha, c)."""

    def __init__(self, params, modes: ModeSet | None = None, cond_max=1e8, enforce_disp=True):
        self.params = params
        self.modes = modes or ModeSet(params)
        self.cond_max = cond_max
        self.enforce_disp = enforce_disp
        self._at0 = self.modes.evaluate([0.0], 4)
        self.W = evans(params, at0=self._at0)
        if enforce_disp and abs(self.W) < params.sigma0:
            raise NearEigenvalueError(
                f"|W[phi_s-, phi_f-](0)| = {abs(self.W):.3e} < sigma0 = {params.sigma0}", self.W)
        s, f = self._at0["s-"], self._at0["f-"]
        self.Bmat = np.array([[s.values(0)[0], f.values(0)[0]], [s.values(1)[0], f.values(1)[0]]])

    # -- coefficients ------------------------------------------------------------
    def interior(self, x, at_x: dict | None = None):
        """Match matrix and coefficients at one source point."""
        if at_x is None:
            at_x = self.modes.evaluate([x], 4)
        M = build_match_matrix(self.params, at_x, x)
        cond = M.condition()
        if cond > self.cond_max:
            raise NearEigenvalueError(f"interior matrix condition {cond:.2e} at x = {x}", cond)
        v = M.solve()
        coef = dict(a_minus=-v[0], a_plus=v[1], bt_minus=-v[2], bt_plus=v[3], M=M, cond=cond,
                    residual=float(np.linalg.norm(M.entries @ v - M.rhs) / np.linalg.norm(M.rhs)))
        return coef

    def boundary(self, coef):
        """(d_s, d_f) cancelling G_i and dG_i at z = 0."""
        at0 = self._at0
        M = coef["M"]
        sp = at0["s+"]
        fp = at0["f+"]
        # growing fast mode relative to its normalization at x
        rel = np.exp(np.clip(fp.logscale[0] - M.logF_plus, -745.0, 700.0))
        gi = coef["a_plus"] * sp.d[:2, 0] + coef["bt_plus"] * fp.d[:2, 0] * rel / M.F_plus
        d = np.linalg.solve(self.Bmat, -gi)
        return complex(d[0]), complex(d[1])

    # -- evaluation ----------------------------------------------------------------
    def _combine(self, x, coef, ds, df, mz: dict, nder):
        """G^{app}(x, z) derivatives 0..nder-1 at the points of ``mz``."""
        M = coef["M"]
        z = mz["s-"].z
        out = np.zeros((nder, z.size), complex)
        right = z > x
        left = ~right
        fm, fp = mz["f-"], mz["f+"]
        sm, sp = mz["s-"], mz["s+"]
        if right.any():
            r = np.exp(np.clip(fm.logscale[right] - M.logF_minus, -745.0, 700.0))
            out[:, right] = (coef["a_minus"] * sm.d[:nder, right]
                             + coef["bt_minus"] * fm.d[:nder, right] * r / M.F_minus)
        if left.any():
            r = np.exp(np.clip(fp.logscale[left] - M.logF_plus, -745.0, 700.0))
            out[:, left] = (coef["a_plus"] * sp.d[:nder, left]
                            + coef["bt_plus"] * fp.d[:nder, left] * r / M.F_plus)
        gb = ds * sm.d[:nder] + df * fm.d[:nder] * np.exp(np.clip(fm.logscale, -745.0, 700.0))
        return out + gb

    def column(self, x, z, nder=2, mz: dict | None = None, side=None):
        """G^{app}(x, .) and derivatives at arbitrary points z (one source x).

        ``side`` = "left" or "right" forces the branch used at z == x.
        """
        z = np.atleast_1d(np.asarray(z, float))
        coef = self.interior(x)
        ds, df = self.boundary(coef)
        if mz is None:
            mz = self.modes.evaluate(z, max(nder, 2))
        if side == "left":
            xs = np.nextafter(x, np.inf) if np.any(z == x) else x
            out = self._combine(xs, coef, ds, df, mz, nder)
        elif side == "right":
            out = self._combine(np.nextafter(x, -np.inf), coef, ds, df, mz, nder)
        else:
            out = self._combine(x, coef, ds, df, mz, nder)
        return out, dict(coef=coef, d_s=ds, d_f=df)

    def jump_report(self, x, coef=None, at_x=None):
        """One-sided limits at z = x: continuity errors (k = 0..2) and eps [G'''] + 1."""
        if at_x is None:
            at_x = self.modes.evaluate([x], 4)
        if coef is None:
            coef = self.interior(x, at_x)
        M = coef["M"]
        # logscale of at_x equals the normalization scale, so the ratio is 1
        right = coef["a_minus"] * at_x["s-"].d[:4, 0] + coef["bt_minus"] * at_x["f-"].d[:4, 0] / M.F_minus
        left = coef["a_plus"] * at_x["s+"].d[:4, 0] + coef["bt_plus"] * at_x["f+"].d[:4, 0] / M.F_plus
        jump = right - left
        mu = abs(M.mu)
        ref = np.abs(right) + np.abs(left)
        cont = np.abs(jump[:3]) / np.maximum(ref[:3], 1e-300)
        j3 = complex(self.params.eps * jump[3])
        return dict(continuity=cont, jump3=j3, jump_error=abs(j3 + 1.0), mu=mu)

    def table(self, x_grid=None, z_grid=None, with_P=True) -> GreenTable:
        """GreenTable on the tensor grid x_grid x z_grid."""
        p = self.params
        x_grid = default_x_grid(p) if x_grid is None else np.asarray(x_grid, float)
        z_grid = default_z_grid(p, x_grid) if z_grid is None else np.asarray(z_grid, float)
        allz = np.unique(np.concatenate([z_grid, x_grid]))
        mz_all = self.modes.evaluate(allz, 4)
        iz = np.searchsorted(allz, z_grid)
        mz = {k: _pick(v, iz) for k, v in mz_all.items()}
        G = np.zeros((x_grid.size, z_grid.size), complex)
        dG = np.zeros_like(G)
        jumps = np.zeros(x_grid.size)
        cont = np.zeros((x_grid.size, 3))
        bnd = np.zeros(x_grid.size)
        coeffs = {k: np.zeros(x_grid.size, complex) for k in
                  ("a_minus", "a_plus", "bt_minus", "bt_plus", "d_s", "d_f", "cond", "res")}
        for i, x in enumerate(x_grid):
            ix = int(np.searchsorted(allz, x))
            at_x = {k: _pick(v, [ix]) for k, v in mz_all.items()}
            coef = self.interior(x, at_x)
            ds, df = self.boundary(coef)
            vals = self._combine(x, coef, ds, df, mz, 2)
            G[i], dG[i] = vals[0], vals[1]
            rep = self.jump_report(x, coef, at_x)
            jumps[i] = rep["jump_error"]
            cont[i] = rep["continuity"]
            at0 = self._combine(x, coef, ds, df, {k: _pick(v, [0]) for k, v in mz_all.items()}, 2)
            bnd[i] = (abs(at0[0, 0]) + abs(at0[1, 0])) / max(np.abs(vals[0]).max(), 1e-300)
            for k, val in (("a_minus", coef["a_minus"]), ("a_plus", coef["a_plus"]),
                           ("bt_minus", coef["bt_minus"]), ("bt_plus", coef["bt_plus"]),
                           ("d_s", ds), ("d_f", df), ("cond", coef["cond"]), ("res", coef["residual"])):
                coeffs[k][i] = val
        tab = GreenTable(x_grid, z_grid, G, dG, None, jumps, cont, bnd, coeffs, mz["s-"],
                         meta=dict(W=self.W, W_tietjens=evans_tietjens(p)))
        if with_P:
            tab.P_coeff = extract_P(p, tab)
        return tab


# ---------------------------------------------------------------------------
# P(x) and envelopes
# ---------------------------------------------------------------------------
def extract_P(params, table: GreenTable, weights=None):
    """P(x) = nu^{1/4} <G(x,.), phi_{s,-}> / <phi_{s,-}, phi_{s,-}> on the z-grid."""
    phi = table.phi_s_minus.values(0)
    w = trapezoid_weights(table.z_grid) if weights is None else weights
    nrm = np.sum(w * np.abs(phi) ** 2)
    if np.sqrt(nrm) < 1e-8:
        raise ProjectionError("||phi_{s,-}|| below 1e-8 on the z-grid")
    return params.nu ** 0.25 * (table.G @ (w * np.conj(phi))) / nrm


@dataclass
class BoundFit:
    """Envelope constants for one of the two Green-function bounds."""

    which: str
    theta_grid: np.ndarray
    C0_curve: np.ndarray
    theta0: float
    C0: float
    feasible: bool
    worst: list

    def C0_at(self, theta):
        i = int(np.argmin(np.abs(self.theta_grid - theta)))
        return float(self.C0_curve[i])

    def as_dict(self):
        return dict(which=self.which, theta0=self.theta0, C0=self.C0, feasible=self.feasible,
                    C0_at_0p1=self.C0_at(0.1), worst=self.worst)


def _int_re_mu(params, z):
    """int_0^z Re mu_f at the points z."""
    zmax = float(np.max(z))
    bp = breakpoints_from_width(0.0, max(zmax, 1e-12), lambda t: np.clip(0.05 * (1.0 + t), 0.01, 0.5),
                                forced=[params.z_c.real])
    F = PiecewiseAntiderivative(bp, lambda t: np.real(params.mu_f(t)))
    return F(np.asarray(z, float))


def fit_envelope(ratio_fn, which, theta_grid=None, knee=2.0, theta_min=0.01, nworst=5, labels=None):
    """Smallest C0(theta) = max ratio over a theta grid and the knee pair.

    ``ratio_fn(theta)`` returns the array of |residual| / envelope-shape.
    The reported theta0 is the largest theta with C0(theta) <= knee * C0(theta_min);
    C0 is monotone in theta, so this is the largest decay rate the data
    supports without inflating the constant by more than ``knee``.
    """
    th = np.geomspace(theta_min, 1.0, 100) if theta_grid is None else np.asarray(theta_grid)
    curve = np.array([float(np.max(ratio_fn(t))) for t in th])
    ok = curve <= knee * curve[0]
    i = int(np.nonzero(ok)[0].max())
    r = ratio_fn(th[i])
    flat = np.argsort(r.ravel())[::-1][:nworst]
    worst = []
    for f in flat:
        ij = np.unravel_index(f, r.shape)
        item = dict(ratio=float(r[ij]))
        if labels is not None:
            item.update(x=float(labels[0][ij[0]]), z=float(labels[1][ij[1]]))
        worst.append(item)
    feasible = bool(np.isfinite(curve[i]) and th[i] >= theta_min)
    return BoundFit(which, th, curve, float(th[i]), float(curve[i]), feasible, worst)


def verify_bounds(params, table: GreenTable, P=None, theta_grid=None, knee=2.0):
    """Fit (C0, theta0) for the G bound and the dG/dz bound.

    Ratios are |G - nu^{-1/4} P phi_{s,-}| over
    (1 / |eps mu_f(x)^2|)(e^{-theta alpha |x - z|} + |mu_f(x)|^{-1} e^{-theta |int_x^z Re mu_f|})
    and the same with the factor |mu_f(z)| / |mu_f(x)| on the fast term for dG/dz.
    """
    p = params
    P = table.P_coeff if P is None else P
    x, z = table.x_grid, table.z_grid
    phi = table.phi_s_minus
    main = (P[:, None] * p.nu ** -0.25) * phi.values(0)[None, :]
    dmain = (P[:, None] * p.nu ** -0.25) * phi.values(1)[None, :]
    resG = np.abs(table.G - main)
    resD = np.abs(table.dzG - dmain)
    mux = np.abs(p.mu_f(x))
    muz = np.abs(p.mu_f(z))
    pref = 1.0 / (np.abs(p.eps) * mux ** 2)
    Ix = _int_re_mu(p, x)
    Iz = _int_re_mu(p, z)
    dI = np.abs(Iz[None, :] - Ix[:, None])
    dx = np.abs(z[None, :] - x[:, None])

    def ratio(kind):
        def f(theta):
            slow = np.exp(-theta * p.alpha * dx)
            fast = np.exp(-theta * dI) / mux[:, None]
            if kind == "dz":
                fast = fast * muz[None, :]
            return (resG if kind == "G" else resD) / (pref[:, None] * (slow + fast))
        return f

    fits = {}
    for kind in ("G", "dz"):
        fits[kind] = fit_envelope(ratio(kind), kind, theta_grid, knee, labels=(x, z))
    return fits


# ---------------------------------------------------------------------------
# weak delta
# ---------------------------------------------------------------------------
def bump(center, radius):
    """Smooth compactly supported bump exp(1 - 1/(1 - s^2)), s = (z - center)/radius."""

    def f(z):
        s = (np.asarray(z, float) - center) / radius
        out = np.zeros_like(s)
        m = np.abs(s) < 1
        out[m] = np.exp(1.0 - 1.0 / (1.0 - s[m] ** 2))
        return out

    return f


def weak_delta(assembler: GreenAssembler, x, test_fn, support, panels=64, order=16):
    """<Orr G(x, .), phi> with the pointwise part by quadrature and the jump analytically.

    Away from z = x, Orr_{alpha,c} G is evaluated exactly from the mode
    derivatives 0..4; at z = x the only distributional contribution is
    -eps [G'''] phi(x).  Returns (total, pointwise part, jump part).
    """
    p = assembler.params
    lo, hi = support
    lo = max(lo, 0.0)
    xg, wg = gauss_legendre(order)
    pts, wts = [], []
    for a, b in ((lo, min(x, hi)), (max(x, lo), hi)):
        if b <= a:
            continue
        br = np.linspace(a, b, panels + 1)
        h = np.diff(br)
        pts.append((br[:-1, None] + h[:, None] * xg[None, :]).ravel())
        wts.append((h[:, None] * wg[None, :]).ravel())
    z = np.concatenate(pts)
    w = np.concatenate(wts)
    order_z = np.argsort(z)
    z, w = z[order_z], w[order_z]
    mz = assembler.modes.evaluate(z, 5)
    vals, info = assembler.column(x, z, nder=5, mz=mz)
    mode = ModeFunction(z, vals, None)
    orr = orr_apply(p, mode)
    phi = test_fn(z)
    pointwise = complex(np.sum(w * orr * phi))
    rep = assembler.jump_report(x, info["coef"])
    jump = complex(-rep["jump3"] * test_fn(np.array([x]))[0])
    return pointwise + jump, pointwise, jump


def _table_worker(args):
    params, x_grid, z_grid = args
    return GreenAssembler(params).table(x_grid, z_grid)


def tables_parallel(param_list, x_grid=None, z_grid=None, jobs=1):
    """Green tables for several parameter sets, optionally in worker processes."""
    work = [(p, x_grid, z_grid) for p in param_list]
    if jobs <= 1 or len(work) <= 1:
        return [_table_worker(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(_table_worker, work))
