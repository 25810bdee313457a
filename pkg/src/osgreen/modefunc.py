"""Sampled mode functions with a per-point logarithmic scale."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["ModeFunction"]


@dataclass
class ModeFunction:
    """Samples of a complex function and its derivatives on a real grid.

    The represented derivative of order k at ``z[i]`` is
    ``d[k, i] * exp(logscale[i])``.  Fast modes grow or decay like
    exp(+-int mu_f), far beyond the double range, so ratios between points are
    formed from mantissas and log-scale differences.
    """

    z: np.ndarray
    d: np.ndarray
    logscale: np.ndarray = None
    tail_rate: complex = 0j
    label: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.z = np.asarray(self.z, float)
        self.d = np.atleast_2d(np.asarray(self.d, complex))
        if self.logscale is None:
            self.logscale = np.zeros(self.z.size)
        self.logscale = np.asarray(self.logscale, float)

    @property
    def nder(self):
        return self.d.shape[0]

    def values(self, k=0):
        """Plain values of the k-th derivative (may overflow for fast modes)."""
        return self.d[k] * np.exp(self.logscale)

    def log_derivative(self, k=1):
        return self.d[k] / self.d[0]

    def scaled_at(self, ref_log):
        """Derivatives multiplied by exp(logscale - ref_log), underflow-safe."""
        ex = self.logscale - ref_log
        fac = np.exp(np.minimum(ex, 700.0))
        return self.d * fac[None, :]

    def __add__(self, other):
        if not isinstance(other, ModeFunction):
            return NotImplemented
        if not np.array_equal(self.z, other.z):
            raise ValueError("grids differ")
        ls = np.maximum(self.logscale, other.logscale)
        a = self.d * np.exp(self.logscale - ls)
        b = other.d[: self.nder] * np.exp(other.logscale - ls)
        n = min(self.nder, other.nder)
        return ModeFunction(self.z, a[:n] + b[:n], ls, self.tail_rate, self.label)

    def __neg__(self):
        return ModeFunction(self.z, -self.d, self.logscale, self.tail_rate, self.label)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor):
        return ModeFunction(self.z, self.d * factor, self.logscale, self.tail_rate, self.label)

    def normalized(self):
        """Same function with mantissas of unit modulus scale (max |d[0]|)."""
        m = np.maximum(np.abs(self.d[0]), 1e-300)
        return ModeFunction(self.z, self.d / m, self.logscale + np.log(m), self.tail_rate, self.label)
