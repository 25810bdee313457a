"""Complex Airy functions Ai, Bi, Ci and the decaying primitives Ai(1,.), Ai(2,.).

Three evaluation strategies are combined:

* the Maclaurin series about 0, used wherever its terms do not cancel badly;
* the large-argument asymptotic series, used for ``|z| >= R_ASY`` in the
  sector ``|arg z| <= pi/3`` where Ai is recessive.  The series for the
  primitives carries a remainder of relative size ``exp(-|zeta|)`` (the
  constant solution of the primitive equations), hence the rather large
  ``R_ASY``;
* Taylor marching of the Airy equation along the ray through ``z``: inward
  from the asymptotic values at ``|z| = R_ASY`` in the recessive sector, and
  outward from the Maclaurin disc elsewhere.  In both cases the wanted
  solution is dominant in the marching direction, so the march is stable.

Primitives are normalized to decay at ``+inf``:

    Ai(1, z) = -int_z^inf Ai(t) dt,   Ai(2, z) = -int_z^inf Ai(1, t) dt,

so that ``Ai(1, 0) = -1/3`` and ``Ai(2, z) = z Ai(1, z) - Ai'(z)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels

__all__ = [
    "AiryRangeError",
    "TietjensPoleError",
    "AiryValue",
    "AI0",
    "AIP0",
    "BI0",
    "BIP0",
    "MAX_ABS_Z",
    "airy_all",
    "airy_ai",
    "airy_bi",
    "airy_ci",
    "airy_primitive",
    "ci_all",
    "tietjens",
]

MAX_ABS_Z = 60.0
R_ASY = 14.0
R_SERIES_MAX = 12.0
_STEP = 1.0
_LOSS_MAX = 1.0e4
_TAYLOR_TOL = 1e-18

AI0 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
AIP0 = -(3.0 ** (-1.0 / 3.0)) / math.gamma(1.0 / 3.0)
BI0 = 3.0 ** (-1.0 / 6.0) / math.gamma(2.0 / 3.0)
BIP0 = 3.0 ** (1.0 / 6.0) / math.gamma(1.0 / 3.0)

OMEGA = np.exp(2j * np.pi / 3)
OMEGA_BAR = np.conj(OMEGA)
_CI_PREF = 2.0 * np.pi * np.exp(-1j * np.pi / 6)


class AiryRangeError(ValueError):
    """Argument outside the documented validity disc ``|z| <= MAX_ABS_Z``."""


class TietjensPoleError(ZeroDivisionError):
    """Ai(2, z) vanishes numerically, so Ti(z) is not defined."""

    def __init__(self, z, denom):
        super().__init__(f"Ai(2, z) ~ 0 at z = {z!r} (|Ai(2,z)| = {abs(denom):.3e})")
        self.z = z
        self.abs_denominator = abs(denom)


@dataclass(frozen=True)
class AiryValue:
    """Value and first derivative of an Airy-type function."""

    value: complex
    derivative: complex


def _series_coeffs(nterms=64):
    """Coefficients of the asymptotic series S_m(zeta) for m = -1, 0, 1, 2.

    With zeta = (2/3) z^{3/2} and J_m = (-1)^m Ai(m, z),
    J_m(z) ~ e^{-zeta} z^{-1/4-m/2} / (2 sqrt(pi)) * sum_k s[m][k] zeta^{-k},
    where J_{-1} = -Ai'.  The rows satisfy
    s[m][k] = s[m-1][k] - (k - 1 + 1/6 + m/3) s[m][k-1].
    """
    u = np.empty(nterms)
    u[0] = 1.0
    for k in range(1, nterms):
        u[k] = u[k - 1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (216.0 * k * (2 * k - 1))
    s0 = u * (-1.0) ** np.arange(nterms)
    sm1 = s0.copy()
    sm1[1:] += (np.arange(1, nterms) - 5.0 / 6.0) * s0[:-1]
    rows = {-1: sm1, 0: s0}
    for m in (1, 2):
        p = 1.0 / 6.0 + m / 3.0
        s = np.empty(nterms)
        s[0] = 1.0
        for k in range(1, nterms):
            s[k] = rows[m - 1][k] - (k - 1 + p) * s[k - 1]
        rows[m] = s
    return rows


_S = _series_coeffs()


def _asymptotic(z):
    """Ai, Ai', Ai(1,.), Ai(2,.) from the asymptotic series (|arg z| < pi)."""
    z = np.asarray(z, dtype=complex)
    zeta = (2.0 / 3.0) * z ** 1.5
    inv = 1.0 / zeta
    pref = np.exp(-zeta) / (2.0 * np.sqrt(np.pi))
    out = []
    for m in (0, -1, 1, 2):
        coeff = _S[m]
        total = np.zeros_like(z)
        term_prev = np.full(z.shape, np.inf)
        power = np.ones_like(z)
        active = np.ones(z.shape, dtype=bool)
        for k in range(len(coeff)):
            term = coeff[k] * power
            mag = np.abs(term)
            # stop each point once its terms start growing (optimal truncation)
            active &= mag <= term_prev
            total = np.where(active, total + term, total)
            term_prev = mag
            if not active.any() or np.all(mag[active] < 1e-17 * np.abs(total[active])):
                break
            power = power * inv
        val = pref * z ** (-0.25 - m / 2.0) * total
        out.append(val)
    ai, mai_p, ai1_neg, ai2 = out
    return ai, -mai_p, -ai1_neg, ai2


def _asymptotic_all(z):
    """Asymptotic regime for |z| >= R_ASY, all arguments."""
    z = np.asarray(z, dtype=complex)
    ai = np.empty_like(z)
    aip = np.empty_like(z)
    ai1 = np.empty_like(z)
    ai2 = np.empty_like(z)
    th = np.angle(z)
    direct = np.abs(th) <= 2.0 * np.pi / 3.0
    if direct.any():
        r = _asymptotic(z[direct])
        ai[direct], aip[direct], ai1[direct], ai2[direct] = r
    rot = ~direct
    if rot.any():
        zr = z[rot]
        a1 = _asymptotic(OMEGA * zr)
        a2 = _asymptotic(OMEGA_BAR * zr)
        w, w2 = OMEGA, OMEGA_BAR
        ai[rot] = -w * a1[0] - w2 * a2[0]
        aip[rot] = -w2 * a1[1] - w * a2[1]
        ai1[rot] = -1.0 - a1[2] - a2[2]
        ai2[rot] = -zr - w2 * a1[3] - w * a2[3]
    return ai, aip, ai1, ai2


def _taylor(z0, f0, fp0, f1_0, h, maxterms=400):
    """Taylor step of the Airy equation from z0 by h (vectorized).

    Returns (Ai, Ai', Ai(1,.)) at z0 + h given the same triple at z0.  The
    recurrence lives in the kernel backend (compiled when available).
    """
    return kernels.airy_taylor_step(z0, f0, fp0, f1_0, h, _TAYLOR_TOL, maxterms)


def _maclaurin(z):
    zeros = np.zeros_like(z)
    f0 = np.full(z.shape, AI0, dtype=complex)
    fp0 = np.full(z.shape, AIP0, dtype=complex)
    f1 = np.full(z.shape, -1.0 / 3.0, dtype=complex)
    return _taylor(zeros, f0, fp0, f1, z)


def _loss(z):
    r = np.abs(z)
    return (2.0 / 3.0) * r ** 1.5 * (1.0 + np.cos(1.5 * np.angle(z)))


def _march(z, nsteps=None):
    """Inward Taylor marching from |z| = R_ASY along the ray of z."""
    th = np.angle(z)
    start = R_ASY * np.exp(1j * th)
    ai, aip, ai1, _ = _asymptotic_all(start)
    dist = R_ASY - np.abs(z)
    n = nsteps if nsteps is not None else max(1, int(np.ceil(dist.max())))
    h = (z - start) / n
    cur = start
    for _ in range(n):
        ai, aip, ai1 = _taylor(cur, ai, aip, ai1, h)
        cur = cur + h
    return ai, aip, ai1


def _check_range(z):
    if np.any(~np.isfinite(z)) or np.any(np.abs(z) > MAX_ABS_Z):
        bad = z[~np.isfinite(z) | (np.abs(z) > MAX_ABS_Z)]
        raise AiryRangeError(
            f"Airy argument outside |z| <= {MAX_ABS_Z}: e.g. {complex(bad.flat[0])!r}"
        )


def _series_radius(theta):
    """Largest radius on the ray ``theta`` where the Maclaurin loss is acceptable."""
    d = 1.0 + np.cos(1.5 * theta)
    with np.errstate(divide="ignore"):
        r = (1.5 * math.log(_LOSS_MAX) / np.maximum(d, 1e-300)) ** (2.0 / 3.0)
    return np.minimum(r, R_SERIES_MAX)


def _march_out(z):
    """Outward Taylor marching from the edge of the Maclaurin disc."""
    th = np.angle(z)
    r0 = np.minimum(_series_radius(th), np.abs(z))
    start = r0 * np.exp(1j * th)
    ai, aip, ai1 = _maclaurin(start)
    dist = np.abs(z) - r0
    n = max(1, int(np.ceil(dist.max() / _STEP)))
    h = (z - start) / n
    cur = start
    for _ in range(n):
        ai, aip, ai1 = _taylor(cur, ai, aip, ai1, h)
        cur = cur + h
    return ai, aip, ai1


def airy_all(z, method="auto"):
    """Return ``(Ai, Ai', Ai(1,.), Ai(2,.))`` evaluated at ``z`` (array-like).

    ``method`` forces one strategy for cross-checks: ``"series"`` (Maclaurin),
    ``"march"`` (asymptotic start at ``|z| = R_ASY`` plus inward marching,
    recessive sector only), ``"asymptotic"`` (direct asymptotic series) or
    ``"auto"``.
    """
    z = np.asarray(z, dtype=complex)
    shape = z.shape
    z = z.ravel()
    _check_range(z)
    ai = np.empty_like(z)
    aip = np.empty_like(z)
    ai1 = np.empty_like(z)
    ai2 = np.empty_like(z)
    r = np.abs(z)
    th = np.angle(z)
    empty = np.zeros(z.shape, bool)
    if method == "auto":
        recessive = np.abs(th) <= np.pi / 3
        ser = r <= _series_radius(th)
        far = recessive & ~ser & (r >= R_ASY)
        inward = recessive & ~ser & ~far
        outward = ~recessive & ~ser
    else:
        ser, far, inward, outward = empty.copy(), empty.copy(), empty.copy(), empty.copy()
        {"series": ser, "march": inward, "asymptotic": far}[method][:] = True
        if method == "march" and np.any(r > R_ASY):
            raise ValueError("inward marching is only defined inside |z| < R_ASY")
    if far.any():
        ai[far], aip[far], ai1[far], ai2[far] = _asymptotic_all(z[far])
    if ser.any():
        ai[ser], aip[ser], ai1[ser] = _maclaurin(z[ser])
    if inward.any():
        ai[inward], aip[inward], ai1[inward] = _march(z[inward])
    if outward.any():
        ai[outward], aip[outward], ai1[outward] = _march_out(z[outward])
    near = ~far
    ai2[near] = z[near] * ai1[near] - aip[near]
    return tuple(a.reshape(shape) for a in (ai, aip, ai1, ai2))


def _scalar(x):
    x = np.asarray(x)
    return complex(x) if x.ndim == 0 else x


def airy_ai(z):
    """Ai(z) and Ai'(z) as an :class:`AiryValue` (arrays allowed)."""
    ai, aip, _, _ = airy_all(z)
    return AiryValue(_scalar(ai), _scalar(aip))


def airy_bi(z):
    """Bi(z) = e^{i pi/6} Ai(omega z) + e^{-i pi/6} Ai(omega^-1 z) and Bi'."""
    z = np.asarray(z, dtype=complex)
    a1 = airy_all(OMEGA * z)
    a2 = airy_all(OMEGA_BAR * z)
    e, eb = np.exp(1j * np.pi / 6), np.exp(-1j * np.pi / 6)
    val = e * a1[0] + eb * a2[0]
    der = e * OMEGA * a1[1] + eb * OMEGA_BAR * a2[1]
    return AiryValue(_scalar(val), _scalar(der))


def ci_all(z):
    """Ci and its decaying primitives: ``(Ci, Ci', Ci(1,.), Ci(2,.))``.

    Ci = -i pi (Ai + i Bi) = 2 pi e^{-i pi/6} Ai(omega^-1 z).  The primitives
    Ci(k, z) = 2 pi e^{-i pi/6} omega^k Ai(k, omega^-1 z) decay along the ray
    arg z = 2 pi / 3, where Ci itself is recessive.
    """
    z = np.asarray(z, dtype=complex)
    ai, aip, ai1, ai2 = airy_all(OMEGA_BAR * z)
    return (
        _CI_PREF * ai,
        _CI_PREF * OMEGA_BAR * aip,
        _CI_PREF * OMEGA * ai1,
        _CI_PREF * OMEGA ** 2 * ai2,
    )


def airy_ci(z):
    """Ci(z) = -i pi (Ai(z) + i Bi(z)) and its derivative."""
    ci, cip, _, _ = ci_all(z)
    return AiryValue(_scalar(ci), _scalar(cip))


def airy_primitive(kind, order, z):
    """``order``-th decaying primitive (order 1 or 2) of Ai or Ci at ``z``."""
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    if kind in ("Ai", "ai"):
        vals = airy_all(z)
    elif kind in ("Ci", "ci"):
        vals = ci_all(z)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return _scalar(vals[1 + order])


def tietjens(z, rel_threshold=1e-14):
    """Tietjens function Ti(z) = Ai(1, z) / Ai(2, z)."""
    _, _, ai1, ai2 = airy_all(z)
    ai1 = np.asarray(ai1)
    ai2 = np.asarray(ai2)
    bad = np.abs(ai2) <= rel_threshold * np.abs(ai1)
    if bad.any():
        zz = np.asarray(z, dtype=complex)
        idx = np.argmax(bad) if bad.ndim else ()
        raise TietjensPoleError(complex(zz.flat[idx] if bad.ndim else zz), complex(ai2.flat[idx] if bad.ndim else ai2))
    return _scalar(ai1 / ai2)
