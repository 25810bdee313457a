"""Approximate and direct Green functions of the Orr-Sommerfeld operator.

Modules:

* ``special``   complex Airy functions, their decaying primitives and Ti
* ``profile``   shear profiles and the spectral parameter bundle
* ``langer``    Langer transformation near the critical layer
* ``airysolve`` Airy-layer Green function and solver
* ``fast``      fast (viscous) modes
* ``rayleigh``  Rayleigh modes, Green function and solver
* ``slow``      slow (inviscid) modes
* ``green``     approximate Green function, Evans function and envelope bounds
* ``oracle``    direct numerical solution used as ground truth
* ``cli``       command-line front end
"""
__version__ = "0.1.0"

from .kernels import BACKEND  # noqa: E402
from .profile import (  # noqa: E402
    ParameterError,
    SpectralParams,
    make_exponential_profile,
    make_params,
    make_tanh_profile,
    profile_from_spec,
)

__all__ = [
    "__version__",
    "BACKEND",
    "ParameterError",
    "SpectralParams",
    "make_exponential_profile",
    "make_params",
    "make_tanh_profile",
    "profile_from_spec",
]
