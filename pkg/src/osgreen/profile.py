"""Shear profiles U(z) and the spectral parameters (nu, alpha, c).

Every profile can return exact Taylor jets of U at arrays of complex points,
so downstream code obtains U', U'', ... without finite differences.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .jet import Jet

__all__ = [
    "ShearProfile",
    "ExponentialProfile",
    "TanhProfile",
    "SeriesProfile",
    "make_exponential_profile",
    "make_tanh_profile",
    "make_series_profile",
    "profile_from_spec",
    "find_critical_layer",
    "SpectralParams",
    "ParameterError",
    "ConvergenceError",
    "make_params",
    "mu_f",
    "gamma_of",
]


class ParameterError(ValueError):
    """Spectral parameters outside the regime handled by the construction."""


class ConvergenceError(RuntimeError):
    """Newton iteration for the critical layer failed."""

    def __init__(self, msg, last_iterate):
        super().__init__(msg)
        self.last_iterate = last_iterate


class ShearProfile:
    """Base class: holomorphic U with U(0) = 0, U'(0) > 0 and U -> U_plus."""

    kind = "abstract"
    U_plus: float
    beta: float

    @property
    def decay_rate(self) -> float:
        raise NotImplementedError

    @property
    def holo_radius(self) -> float:
        raise NotImplementedError

    def jet(self, z, order) -> Jet:
        """Normalized Taylor coefficients of U at each point of ``z``."""
        raise NotImplementedError

    def eval(self, z, k=0):
        """k-th derivative of U at ``z`` (scalar or array)."""
        z = np.asarray(z, dtype=complex)
        d = self.jet(z.ravel(), k).t[k] * factorial(k)
        d = d.reshape(z.shape)
        return complex(d) if d.ndim == 0 else d

    def __call__(self, z, k=0):
        return self.eval(z, k)

    def spec(self) -> dict:
        return {"kind": self.kind, "U_plus": self.U_plus, "beta": self.beta}


class ExponentialProfile(ShearProfile):
    """U(z) = U_plus (1 - exp(-beta z)); entire."""

    kind = "exponential"

    def __init__(self, U_plus, beta):
        if not (U_plus > 0 and beta > 0):
            raise ParameterError("exponential profile needs U_plus > 0 and beta > 0")
        self.U_plus = float(U_plus)
        self.beta = float(beta)

    @property
    def decay_rate(self):
        return self.beta

    @property
    def holo_radius(self):
        return math.inf

    def jet(self, z, order):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        e = np.exp(-self.beta * z)
        k = np.arange(order + 1)
        coef = -self.U_plus * (-self.beta) ** k / np.array([factorial(j) for j in k], float)
        t = coef[:, None] * e[None, :]
        t[0] += self.U_plus
        return Jet(t)


class TanhProfile(ShearProfile):
    """U(z) = U_plus tanh(beta z); poles at z = i pi (2k+1) / (2 beta)."""

    kind = "tanh"

    def __init__(self, U_plus, beta):
        if not (U_plus > 0 and beta > 0):
            raise ParameterError("tanh profile needs U_plus > 0 and beta > 0")
        self.U_plus = float(U_plus)
        self.beta = float(beta)

    @property
    def decay_rate(self):
        return 2.0 * self.beta

    @property
    def holo_radius(self):
        return math.pi / (2.0 * self.beta)

    def jet(self, z, order):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        th = np.tanh(self.beta * z)
        # T = tanh(w) satisfies T' = 1 - T^2; build the jet by that recurrence
        t = np.zeros((order + 1, z.size), dtype=complex)
        t[0] = th
        for n in range(order):
            # (n+1) t_{n+1} = beta * [1 - T^2]_n
            sq = np.einsum("j...,j...->...", t[: n + 1], t[n::-1])
            rhs = -sq + (1.0 if n == 0 else 0.0)
            t[n + 1] = self.beta * rhs / (n + 1)
        return Jet(self.U_plus * t)


class SeriesProfile(ShearProfile):
    """U(z) = U_plus (1 - exp(-beta z) P(z)), P(z) = 1 + a_1 z + a_2 z^2 + ...

    A user profile given by a polynomial correction of the exponential tail.
    U'(0) = U_plus (beta - a_1) must be positive.
    """

    kind = "series"

    def __init__(self, U_plus, beta, coeffs=()):
        self.U_plus = float(U_plus)
        self.beta = float(beta)
        self.coeffs = np.concatenate([[1.0], np.asarray(coeffs, float)])
        if not (self.U_plus > 0 and self.beta > 0):
            raise ParameterError("series profile needs U_plus > 0 and beta > 0")
        if self.beta - (self.coeffs[1] if self.coeffs.size > 1 else 0.0) <= 0:
            raise ParameterError("series profile must have U'(0) > 0")

    @property
    def decay_rate(self):
        return self.beta

    @property
    def holo_radius(self):
        return math.inf

    def jet(self, z, order):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        n = order
        # polynomial P jet by direct Taylor shift
        P = np.polynomial.Polynomial(self.coeffs)
        pt = np.zeros((n + 1, z.size), dtype=complex)
        d = P
        for k in range(n + 1):
            pt[k] = d(z) / factorial(k)
            d = d.deriv()
        e = np.exp(-self.beta * z)
        k = np.arange(n + 1)
        et = ((-self.beta) ** k / np.array([factorial(j) for j in k], float))[:, None] * e[None, :]
        prod = (Jet(pt) * Jet(et)).t
        out = -self.U_plus * prod
        out[0] += self.U_plus
        return Jet(out)

    def spec(self):
        d = super().spec()
        d["coeffs"] = list(self.coeffs[1:])
        return d


def make_exponential_profile(U_plus=1.0, beta=1.0):
    return ExponentialProfile(U_plus, beta)


def make_tanh_profile(U_plus=1.0, beta=1.0):
    return TanhProfile(U_plus, beta)


def make_series_profile(U_plus, beta, coeffs):
    return SeriesProfile(U_plus, beta, coeffs)


def profile_from_spec(kind, U_plus=1.0, beta=1.0, coeffs=()):
    kind = kind.lower()
    if kind == "exponential":
        return ExponentialProfile(U_plus, beta)
    if kind == "tanh":
        return TanhProfile(U_plus, beta)
    if kind == "series":
        return SeriesProfile(U_plus, beta, coeffs)
    raise ParameterError(f"unknown profile kind {kind!r}")


def find_critical_layer(profile: ShearProfile, c: complex, maxiter=50, tol=1e-12) -> complex:
    """Solve U(z_c) = c by damped Newton iteration from c / U'(0)."""
    c = complex(c)
    if c == 0:
        return 0j
    z = c / profile.eval(0.0, 1).real
    res = profile.eval(z) - c
    for _ in range(maxiter):
        if abs(res) <= tol * abs(c):
            return complex(z)
        step = res / profile.eval(z, 1)
        lam = 1.0
        while True:
            zn = z - lam * step
            rn = profile.eval(zn) - c
            if abs(rn) < abs(res) or lam < 1e-6:
                break
            lam *= 0.5
        z, res = zn, rn
        if abs(z) > 0.9 * profile.holo_radius:
            raise ConvergenceError("Newton iterate left the holomorphy disc", z)
    if abs(res) <= tol * abs(c):
        return complex(z)
    raise ConvergenceError(f"critical layer not converged after {maxiter} steps", z)


def _gamma(alpha, nu, u1c):
    g3 = 1j * alpha * u1c / nu
    base = abs(g3) ** (1.0 / 3.0) * cmath.exp(1j * cmath.phase(g3) / 3.0)
    roots = [base * cmath.exp(2j * math.pi * k / 3.0) for k in range(3)]
    return min(roots, key=lambda r: abs(cmath.phase(r) - math.pi / 6.0))


@dataclass(frozen=True)
class SpectralParams:
    """Immutable bundle (nu, alpha, c) plus derived quantities.

    ``sigma1`` is the matching abscissa between the Airy layer and the WKB
    region; ``sigma0`` is the spectral-gap parameter of the Im c condition.
    """

    profile: ShearProfile
    nu: float
    alpha: float
    c: complex
    sigma0: float
    sigma1: float
    z_c: complex
    gamma: complex
    U1c: complex
    wkb_order: int = 2
    h_order: int = 2
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def eps(self) -> complex:
        return self.nu / (1j * self.alpha)

    @property
    def Z_max(self) -> float:
        return max(10.0, 25.0 / self.profile.decay_rate, 25.0 / self.alpha)

    @property
    def U1_0(self) -> float:
        return self.profile.eval(0.0, 1).real

    def mu_f(self, z):
        return mu_f(self, z)

    def as_dict(self):
        return {
            "profile": self.profile.spec(),
            "nu": self.nu,
            "alpha": self.alpha,
            "c_re": self.c.real,
            "c_im": self.c.imag,
            "sigma0": self.sigma0,
            "sigma1": self.sigma1,
        }


def mu_f(params: SpectralParams, z):
    """sqrt((U(z) - c) / eps) with non-negative real part."""
    u = params.profile.eval(z)
    r = np.sqrt((np.asarray(u) - params.c) / params.eps)
    r = np.where(r.real < 0, -r, r)
    return complex(r) if np.ndim(r) == 0 else r


def gamma_of(params: SpectralParams) -> complex:
    return params.gamma


def make_params(
    profile: ShearProfile,
    nu: float,
    alpha: float,
    c: complex,
    sigma0: float = 0.1,
    sigma1: float | None = None,
    wkb_order: int = 2,
    h_order: int = 2,
    check_gap: bool = True,
) -> SpectralParams:
    """Validate (nu, alpha, c) and compute z_c, gamma and sigma1.

    When ``sigma1`` is None the matching point is
    ``max(min(0.3, holo_radius/2), z_10)`` where ``z_10`` is the smallest
    abscissa with ``|gamma (g(z) - z_c)| >= 10``.
    """
    c = complex(c)
    if nu <= 0 or alpha <= 0:
        raise ParameterError("nu and alpha must be positive")
    if check_gap and abs(c.imag) < sigma0 * nu ** 0.25 * (1 - 1e-12):
        raise ParameterError(
            f"|Im c| = {abs(c.imag):.3e} is below sigma0 nu^(1/4) = {sigma0 * nu ** 0.25:.3e}"
        )
    if c.imag <= 0:
        raise ParameterError("only Im c > 0 is supported")
    z_c = find_critical_layer(profile, c)
    u1c = complex(profile.eval(z_c, 1))
    if u1c.real <= 0:
        raise ParameterError("Re U'(z_c) must be positive")
    gam = _gamma(alpha, nu, u1c)
    base = SpectralParams(profile, float(nu), float(alpha), c, float(sigma0), 0.0, z_c, gam, u1c,
                          wkb_order, h_order)
    if sigma1 is None:
        from .langer import default_sigma1

        sigma1 = default_sigma1(base)
    return SpectralParams(profile, float(nu), float(alpha), c, float(sigma0), float(sigma1), z_c,
                          gam, u1c, wkb_order, h_order)
