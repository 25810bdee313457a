import cmath

import numpy as np
import pytest

from osgreen.profile import (ParameterError, find_critical_layer, make_exponential_profile, make_params,
                             make_tanh_profile, profile_from_spec)


@pytest.mark.parametrize("prof", [make_exponential_profile(1.3, 0.8), make_tanh_profile(1.0, 2.0)])
def test_jet_derivatives(prof):
    z = np.array([0.0, 0.3 + 0.1j, 1.7])
    h = 1e-4
    for k in range(3):
        fd = (prof.eval(z + h, k) - prof.eval(z - h, k)) / (2 * h)
        assert np.allclose(fd, prof.eval(z, k + 1), rtol=1e-7, atol=1e-9)
    assert abs(prof.eval(0.0)) < 1e-15
    assert prof.eval(0.0, 1).real > 0
    assert abs(prof.eval(40.0) - prof.U_plus) < 1e-10


def test_critical_layer():
    prof = make_exponential_profile(1.0, 1.0)
    c = 0.05 + 0.05j
    zc = find_critical_layer(prof, c)
    assert abs(prof.eval(zc) - c) < 1e-13
    assert zc == pytest.approx(-cmath.log(1 - c))


def test_params_derived():
    prof = make_exponential_profile(1.0, 1.0)
    nu = 1e-4
    q = nu ** 0.25
    p = make_params(prof, nu, q, (0.5 + 0.5j) * q)
    assert p.eps == pytest.approx(nu / (1j * q))
    g3 = 1j * p.alpha * p.U1c / nu
    assert p.gamma ** 3 == pytest.approx(g3, rel=1e-12)
    assert abs(cmath.phase(p.gamma) - cmath.pi / 6) < 0.3
    mu = p.mu_f(np.array([0.5, 2.0]))
    assert np.all(mu.real > 0)
    assert np.allclose(mu ** 2 * p.eps, prof.eval(np.array([0.5, 2.0])) - p.c)
    d = p.as_dict()
    assert d["profile"]["kind"] == "exponential" and d["nu"] == nu


def test_params_errors():
    prof = make_exponential_profile(1.0, 1.0)
    with pytest.raises(ParameterError):
        make_params(prof, -1.0, 0.1, 0.05 + 0.05j)
    with pytest.raises(ParameterError):
        make_params(prof, 1e-4, 0.1, 0.05 + 0.001j)  # spectral gap violated
    with pytest.raises(ParameterError):
        make_params(prof, 1e-4, 0.1, 0.05 - 0.05j, check_gap=False)
    with pytest.raises(ParameterError):
        make_exponential_profile(-1.0, 1.0)
    with pytest.raises(ParameterError):
        profile_from_spec("parabola")


def test_spec_examples():
    prof = make_exponential_profile(2.0, 0.5)
    assert prof.eval(2.0).real == pytest.approx(2 * (1 - np.exp(-1.0)), rel=1e-14)
    unit = make_exponential_profile(1.0, 1.0)
    z = np.linspace(0.1, 5, 7)
    assert np.allclose(unit.eval(z, 2) / unit.eval(z, 1), -1.0)
    assert find_critical_layer(unit, 0.0) == 0
    zc = find_critical_layer(unit, 0.01 + 0.01j)
    assert zc == pytest.approx(-np.log(1 - (0.01 + 0.01j)), abs=1e-12)
    assert zc.imag > 0


@pytest.mark.parametrize("nu", [1e-3, 1e-4, 1e-5, 1e-6])
def test_gamma_and_mu_properties(nu):
    prof = make_exponential_profile(1.0, 1.0)
    q = nu ** 0.25
    p = make_params(prof, nu, q, (0.5 + 0.5j) * q)
    assert 0.5 <= abs(p.gamma) * q <= 2.0
    assert abs(cmath.phase(p.gamma) - cmath.pi / 6) <= 5 * q
    assert abs(p.eps * p.gamma ** 3 - prof.eval(p.z_c, 1)) <= 1e-12 * abs(p.gamma ** 3 * p.eps)
    z = np.linspace(0, 20, 4001)
    mu = p.mu_f(z)
    assert np.min(np.abs(mu)) >= np.sqrt(p.alpha * p.c.imag / nu) - 1e-12
    assert np.max(np.abs(np.diff(np.unwrap(np.angle(mu))))) < np.pi / 2
