"""Acceptance criteria 1-8.  Each test prints one PASS/FAIL line (also shown
in the terminal summary).  Thresholds are fixed before measurement; see the
decision ledger for the two criteria that need comment."""
from __future__ import annotations

import numpy as np
import pytest
from conftest import PROFILE, assembler, default_params, direct_table, green_table, record

from osgreen.special import _series_radius, airy_all, airy_bi, tietjens

NU_PAIR = (1e-4, 1e-5)
NU_TRIPLE = (1e-4, 1e-5, 1e-6)


def cauchy_derivative(f, z, r=0.05, n=32):
    """f'(z) from the trapezoid rule on a circle of radius r (spectrally accurate)."""
    th = 2 * np.pi * np.arange(n) / n
    w = np.exp(1j * th)
    vals = f(z[:, None] + r * w[None, :])
    return np.mean(vals / (r * w[None, :]), axis=1)


# ---------------------------------------------------------------------------
def test_ac1_special_functions(rng):
    z = rng.uniform(0, 20, 200) * np.exp(1j * rng.uniform(-np.pi, np.pi, 200))
    ai, aip, ai1, ai2 = airy_all(z)
    aipp = cauchy_derivative(lambda t: airy_all(t.ravel())[1].reshape(t.shape), z)
    res = np.max(np.abs(aipp - z * ai) / (np.abs(z * ai) + np.abs(aip) + np.abs(ai)))

    zw = z[np.abs(z) <= 10]
    b = airy_bi(zw)
    a = airy_all(zw)
    scale = np.maximum(1.0, np.abs(a[0] * b.derivative) + np.abs(a[1] * b.value))
    wr = np.max(np.abs(a[0] * b.derivative - a[1] * b.value - 1 / np.pi) / scale)

    zp = z[np.abs(z) <= 12]
    d1 = cauchy_derivative(lambda t: airy_all(t.ravel())[2].reshape(t.shape), zp)
    d2 = cauchy_derivative(lambda t: airy_all(t.ravel())[3].reshape(t.shape), zp)
    a = airy_all(zp)
    chain = max(np.max(np.abs(d1 - a[0]) / (np.abs(a[0]) + np.abs(a[2]))),
                np.max(np.abs(d2 - a[2]) / (np.abs(a[2]) + np.abs(a[3]))))

    # overlap: Maclaurin vs inward march inside the Maclaurin validity radius, and
    # march vs asymptotic series at their seam
    th1 = rng.uniform(-np.pi / 3, np.pi / 3, 60)
    r1 = rng.uniform(0.6, 1.0, 60) * _series_radius(th1) * np.exp(1j * th1)
    r2 = 13.99 * np.exp(1j * rng.uniform(-np.pi / 3, np.pi / 3, 60))
    ov = 0.0
    for pts, m1, m2 in ((r1, "series", "march"), (r2, "march", "asymptotic")):
        x, y = airy_all(pts, method=m1), airy_all(pts, method=m2)
        ov = max(ov, max(np.max(np.abs(u - v) / np.abs(v)) for u, v in zip(x[:3], y[:3])))
    ok = res <= 1e-8 and wr <= 1e-9 and chain <= 1e-6 and ov <= 1e-9
    record("AC1", ok, f"ODE residual {res:.1e}, Wronskian {wr:.1e}, primitive chain {chain:.1e}, overlap {ov:.1e}")
    assert ok


# ---------------------------------------------------------------------------
def test_ac2_langer():
    from osgreen.langer import LangerMap, airy_operator_residual

    Ks, g_err, gp_err, b_err = [], 0.0, 0.0, 0.0
    for nu in NU_PAIR:
        p = default_params(nu)
        lm = LangerMap(p)
        g, gp = lm.g_and_prime(p.z_c)
        g_err = max(g_err, float(np.max(np.abs(g - p.z_c))))
        gp_err = max(gp_err, float(np.max(np.abs(gp - 1))))
        zz = np.linspace(0, p.sigma1, 60)
        gv, _ = lm.g_and_prime(zz)
        c1 = lm.C1_direct(zz)
        b_err = max(b_err, float(np.max(np.abs(lm.B1(gv) - c1) / np.abs(c1))))
        ti = lm.tilde("ai", zz, 2)
        res = airy_operator_residual(p, ti, zz)
        zeta = lm.zeta(zz).value
        env = nu ** 0.75 * np.sqrt(1 + np.abs(zeta)) * np.abs(airy_all(zeta)[0])
        Ks.append(float(np.max(np.abs(res) / env)))
    pinned = max(Ks) / min(Ks) <= 1.5
    ok = g_err <= 1e-10 and gp_err <= 1e-8 and b_err <= 1e-10 and pinned
    record("AC2", ok, f"|g(zc)-zc| {g_err:.1e}, |g'(zc)-1| {gp_err:.1e}, B1=C1 {b_err:.1e}, "
                      f"K(nu=1e-4,1e-5) = {Ks[0]:.4f}, {Ks[1]:.4f}")
    assert ok


def _rayleigh_identity_defect(R, p, f, eta=1.5):
    """Weighted defect of Ray_0 (RaySolver_0 f) = f.

    The solver returns (Y, Y', Y'') with Y'' taken from the equation, so the
    equation holds pointwise by construction; what has to be checked is that
    the returned Y' and Y'' are the derivatives of Y.  On panels clustered at
    the critical layer, increments of Y and Y' are compared with 16-point
    Gauss-Legendre integrals of Y' and Y'' (divided by the panel width).
    """
    from osgreen.quadrature import breakpoints_from_width, gauss_legendre, layer_width

    bp = breakpoints_from_width(0.0, 5.0, layer_width(p.z_c, hmax=0.1))
    x, w = gauss_legendre(16)
    h = np.diff(bp)
    nodes = (bp[:-1, None] + h[:, None] * x[None, :]).ravel()
    Yn = R.solve(f, nodes, alpha_mode=0, nder=3)
    Yb = R.solve(f, bp, alpha_mode=0, nder=3)
    d1 = Yn.d[1].reshape(h.size, -1)
    d2 = Yn.d[2].reshape(h.size, -1)
    e0 = np.abs(np.diff(Yb.d[0]) - h * (d1 @ w))
    e1 = np.abs(np.diff(Yb.d[1]) - h * (d2 @ w))
    wt = np.exp(eta * bp[:-1]) / h
    return float(max((e0 * wt).max(), (e1 * wt).max()))


# ---------------------------------------------------------------------------
def test_ac3_rayleigh():
    from osgreen.rayleigh import NormProfile, Rayleigh

    nu = 1e-4
    q = nu ** 0.25
    consts, w_err, p2_err, ident = [], 0.0, 0.0, 0.0
    f = lambda t: np.exp(-t)  # noqa: E731
    zq = np.linspace(0, 5, 501)
    norm = NormProfile(1.5)
    for ci in (0.1, 0.3, 1.0):
        p = default_params(nu, 0.5, ci)
        R = Rayleigh(p)
        zs = np.sort(np.concatenate([np.linspace(0, 3, 60), [p.z_c.real]]))
        w_err = max(w_err, float(np.max(np.abs(R.wronskian(zs) - 1))))
        p2_err = max(p2_err, abs(R.phi2([0.0], 1).d[0, 0] + 1 / p.U1_0))
        ident = max(ident, _rayleigh_identity_defect(R, p, f) / norm.x_norm(zq, f(zq)))
        E = R.err(f, zq)
        consts.append(norm.x_norm(zq, E.d[0]) / (p.alpha * (1 + abs(np.log(p.c.imag)))))
        assert p.c.imag == pytest.approx(ci * q)
    stable = max(consts) / min(consts) <= 3.0
    ok = w_err <= 1e-8 and p2_err <= 1e-10 and ident <= 1e-5 and stable
    record("AC3", ok, f"W-1 {w_err:.1e}, phi20(0)+1/U'(0) {p2_err:.1e}, Ray0 o RaySolver0 - id {ident:.1e}, "
                      f"Err constants {', '.join(f'{c:.3f}' for c in consts)}")
    assert ok


# ---------------------------------------------------------------------------
def test_ac4_slow_modes():
    from osgreen.slow import SlowModes

    rel, Ks, res = 0.0, [], []
    for nu in NU_TRIPLE:
        p = default_params(nu)
        S = SlowModes(p)
        ps1 = S.psi1(np.array([0.0]), 2).d[0, 0]
        ref = p.alpha * PROFILE.U_plus * (PROFILE.U_plus - 2 * p.c) / p.U1_0
        rel = max(rel, abs(ps1 - ref) / abs(ref))
        m = S.phi_minus(np.array([0.0]), 1).d[0, 0]
        lead = -p.c + p.alpha * PROFILE.U_plus ** 2 / p.U1_0
        Ks.append(abs(m - lead) / nu ** 0.5)
        z = np.sort(np.concatenate([np.linspace(0, 3, 301), p.z_c.real + np.linspace(-5, 5, 41) * p.z_c.imag]))
        res.append(float(np.max(np.abs(S.orr_residual_minus(z[z >= 0])))))
    slope = np.polyfit(np.log(NU_TRIPLE), np.log(res), 1)[0]
    stable = max(Ks[:2]) / min(Ks[:2]) <= 3.0
    ok = rel <= 1e-6 and stable and abs(slope - 0.5) <= 0.1
    record("AC4", ok, f"psi1(0) rel {rel:.1e}, K(nu) {', '.join(f'{k:.3f}' for k in Ks)}, "
                      f"Orr residual slope {slope:.3f}")
    assert ok


# ---------------------------------------------------------------------------
def test_ac5_fast_modes(rng):
    from osgreen.green import ModeSet
    from osgreen.quadrature import PiecewiseAntiderivative, breakpoints_from_width

    Ks, tis = [], []
    for nu in NU_TRIPLE:
        p = default_params(nu)
        fm = ModeSet(p).fast
        m = fm.phi(np.array([0.0]), -1, 2)
        arg = -p.gamma * p.z_c
        a2 = airy_all(arg)[3]
        phi0 = m.d[0, 0] * np.exp(m.logscale[0])
        Ks.append(abs(phi0 - a2) / nu ** 0.25)
        tis.append(abs(m.d[1, 0] / m.d[0, 0] - p.gamma * tietjens(arg)))
    # growth-ratio bound at 100 random pairs (nu = 1e-5)
    p = default_params(1e-5)
    fm = ModeSet(p).fast
    pairs = np.sort(rng.uniform(0, 3, (100, 2)), axis=1)
    pts = np.unique(pairs)
    m = fm.phi(pts, +1, 1)
    logabs = np.log(np.abs(m.d[0])) + m.logscale
    bp = breakpoints_from_width(0.0, 3.0, lambda t: np.full_like(t, 0.01), forced=pts)
    F = PiecewiseAntiderivative(bp, lambda t: p.mu_f(t).real.astype(complex))
    I = F(pts).real
    idx = np.searchsorted(pts, pairs)
    logratio = logabs[idx[:, 1]] - logabs[idx[:, 0]] - (I[idx[:, 1]] - I[idx[:, 0]])
    K_ratio = float(np.exp(logratio.max()))
    ok = max(Ks) <= 1.0 and max(tis) <= 1.0 and K_ratio <= 5.0
    record("AC5", ok, f"|phi_f-(0) - Ai(2)|/nu^(1/4) {', '.join(f'{k:.3f}' for k in Ks)}; "
                      f"Tietjens difference {', '.join(f'{t:.3f}' for t in tis)}; ratio-bound K {K_ratio:.3f}")
    assert ok


# ---------------------------------------------------------------------------
WEAK_DELTA_BUMPS = [(0.5, 0.5, 0.2), (0.5, 0.45, 0.3), (1.0, 1.0, 0.5), (0.2, 0.25, 0.15), (2.0, 2.0, 1.0)]


def test_ac6_green_structure():
    from osgreen.green import bump, verify_bounds, weak_delta

    jump = bnd = 0.0
    fits = {}
    for nu in NU_TRIPLE:
        T = green_table(nu)
        jump = max(jump, float(T.jump_errors.max()))
        bnd = max(bnd, float(T.boundary_errors.max()))
        fits[nu] = verify_bounds(default_params(nu), T)
    A = assembler(1e-5)
    wd = []
    for x, c, r in WEAK_DELTA_BUMPS:
        tot, _, _ = weak_delta(A, x, bump(c, r), (c - r, c + r))
        phx = bump(c, r)(np.array([x]))[0]
        wd.append(abs(tot - phx) / abs(phx))
    env_ok, parts = True, []
    for which in ("G", "dz"):
        th0 = min(fits[nu][which].theta0 for nu in NU_TRIPLE)
        c0 = [fits[nu][which].C0_at(0.1) for nu in NU_TRIPLE]
        spread = max(c0) / min(c0)
        env_ok &= th0 >= 0.1 and all(fits[nu][which].feasible for nu in NU_TRIPLE) and spread <= 3.0
        parts.append(f"{which}: theta0 {th0:.2f}, C0 {', '.join(f'{c:.2f}' for c in c0)} (x{spread:.2f})")
    ok = jump <= 1e-3 and bnd <= 1e-8 and max(wd) <= 0.05 and env_ok
    record("AC6", ok, f"jump {jump:.1e}, boundary {bnd:.1e}, weak delta max {max(wd):.3f}; " + "; ".join(parts))
    assert ok


# ---------------------------------------------------------------------------
def test_ac7_oracle_cross_validation():
    from osgreen.green import ModeSet, evans
    from osgreen.oracle import compare, direct_evans

    errs = []
    for nu in NU_PAIR:
        r = compare(default_params(nu), green_table(nu), direct_table(nu))
        errs.append(r["rel_error"])
    ratio = errs[1] / errs[0]
    # Evans ratio on a circle of c around the default point
    Kev = {}
    th = 2 * np.pi * np.arange(6) / 6
    for nu in NU_PAIR:
        q = nu ** 0.25
        devs = []
        for t in th:
            cc = (0.5 + 0.5j + 0.2 * np.exp(1j * t))
            p = default_params(nu, cc.real, cc.imag)
            ms = ModeSet(p)
            devs.append(abs(direct_evans(p, modes=ms) / evans(p, modes=ms) - 1))
        Kev[nu] = max(devs) / q
    ok = errs[0] <= 0.5 and abs(ratio - 0.56) <= 0.25 and max(Kev.values()) <= 5.0 and \
        max(Kev.values()) / min(Kev.values()) <= 2.0
    record("AC7", ok, f"relative error {errs[0]:.4f} -> {errs[1]:.4f}, ratio {ratio:.3f} (target 0.56 +- 0.25); "
                      f"|W_direct/W_approx - 1|/nu^(1/4) {Kev[1e-4]:.2f}, {Kev[1e-5]:.2f}")
    assert ok


# ---------------------------------------------------------------------------
AC8_REASON = ("the default profile U = 1 - exp(-z) is the asymptotic suction profile, whose critical Reynolds "
              "number (about 5.4e4 in units of 1/beta) exceeds 1/nu for nu = 1e-4 and 3e-5: no unstable "
              "mode exists there, so Re lambda > 0 cannot hold on the prescribed nu range")


@pytest.mark.xfail(strict=True, reason=AC8_REASON)
def test_ac8_instability_growth_rate():
    from osgreen.green import evans
    from osgreen.oracle import find_eigenvalue, muller
    from osgreen.profile import make_params

    nus = (1e-4, 3e-5, 1e-5)
    A_s = 2.5
    lam, detail = [], []
    for nu in nus:
        q = nu ** 0.25
        a = A_s * q

        def fa(c):
            return evans(make_params(PROFILE, nu, a, c, check_gap=False))

        seed = (2.7 + 0.5j) * q
        c_app, _ = muller(fa, 0.98 * seed, 1.02 * seed, seed, tol=1e-9)
        c_star, _ = find_eigenvalue(PROFILE, nu, a, c_app)
        lam.append((-1j * a * c_star).real)
        detail.append(f"nu={nu:g}: c*/nu^(1/4) = {c_star / q:.4f}, Re lambda = {lam[-1]:.2e}")
    pos = all(v > 0 for v in lam)
    slope = np.polyfit(np.log(nus), np.log(np.abs(lam)), 1)[0] if all(lam) else float("nan")
    ok = pos and abs(slope - 0.5) <= 0.15
    record("AC8", ok, "; ".join(detail) + f"; slope of |Re lambda| {slope:.3f}"
           + ("" if ok else " [expected failure, see ledger]"))
    assert ok


def test_ac8_supporting_neutral_point():
    """The oracle reproduces the known neutral point of the suction profile."""
    from osgreen.oracle import find_eigenvalue

    c, info = find_eigenvalue(PROFILE, 1 / 54370.0, 0.1555, 0.15 + 0.001j)
    assert abs(c.real - 0.1507) < 2e-3
    assert abs(c.imag) < 2e-3
