import numpy as np
import pytest
from conftest import default_params

from osgreen.fast import FastModes


@pytest.fixture(scope="module")
def fm():
    return FastModes(default_params(1e-5))


def test_glue_and_airy_residual(fm):
    for sg in (-1, 1):
        assert abs(fm.glue_mismatch(sg)) < 1e-8
    z = np.linspace(0, 3, 301)
    # the relative residual of the Airy-type equation scales like nu^(1/2)
    bound = 0.02 * fm.params.nu ** 0.5
    assert np.max(fm.airy_residual(z, -1)) < bound
    assert np.max(fm.airy_residual(z, +1)) < bound


@pytest.mark.parametrize("nu", [1e-4, 1e-5])
def test_log_derivative_matches_mu(nu):
    # phi'/phi = -mu_f up to the first WKB correction, whose relative size is
    # (nu^(1/4)/z)^(3/2) once z is several layer widths away from the wall
    p = default_params(nu)
    q = nu ** 0.25
    z = np.linspace(5 * q, 3, 200)
    m = FastModes(p).phi(z, -1, 2)
    mu = p.mu_f(z)
    rel = np.abs(m.d[1] / m.d[0] + mu) / np.abs(mu)
    assert np.max(rel / (q / z) ** 1.5) < 2.0


def test_batch_matches_pointwise(fm):
    z = np.array([0.0, 0.013, 0.2, 0.9, 2.5])
    for sg in (-1, 1):
        batch = fm.phi(z, sg, 2)
        for i, zi in enumerate(z):
            one = fm.phi(np.array([zi]), sg, 2)
            vb = batch.d[:, i] * np.exp(batch.logscale[i] - one.logscale[0])
            assert np.allclose(vb, one.d[:, 0], rtol=1e-9)


def test_phi_derivative_consistency(fm):
    z0 = 0.4
    h = 1e-4
    m = fm.phi(np.array([z0 - h, z0, z0 + h]), -1, 3)
    v = m.d * np.exp(m.logscale - m.logscale[1])[None, :]
    assert abs((v[0, 2] - v[0, 0]) / (2 * h) - v[1, 1]) <= 1e-5 * abs(v[1, 1])
    assert abs((v[1, 2] - v[1, 0]) / (2 * h) - v[2, 1]) <= 1e-5 * abs(v[2, 1])


def test_decay_rates(fm):
    p = fm.params
    z = np.array([1.0, 2.0])
    m = fm.phi(z, -1, 2)
    assert np.allclose(m.d[1] / m.d[0], -p.mu_f(z), rtol=0.02)
    pl = fm.phi(z, +1, 2)
    assert np.allclose(pl.d[1] / pl.d[0], p.mu_f(z), rtol=0.02)
