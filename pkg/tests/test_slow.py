import numpy as np
import pytest
from conftest import default_params

from osgreen.slow import SlowModes, orr_apply


@pytest.fixture(scope="module")
def slow():
    return SlowModes(default_params(1e-4))


@pytest.mark.parametrize("nu", [1e-4, 1e-5])
def test_wronskian_of_slow_modes(nu):
    # W[phi_{s,-}, phi_{s,+}] = 1 up to O(nu^(1/4)) inside the critical layer
    s = SlowModes(default_params(nu))
    z = np.linspace(0, 1, 101)
    a = s.phi_plus(z, 2).d
    b = s.phi_minus(z, 2).d
    dev = np.abs(b[0] * a[1] - b[1] * a[0] - 1)
    assert np.max(dev) < 5 * nu ** 0.25
    assert np.max(dev[z >= 0.5]) < 0.05


def test_phi_plus_boundary(slow):
    p = slow.params
    assert slow.phi_plus(np.array([0.0]), 1).d[0, 0] == pytest.approx(-1 / p.U1_0, rel=0.1)


def test_orr_residual_small(slow):
    p = slow.params
    z = np.linspace(0, 3, 301)
    r = slow.orr_residual_minus(z)
    assert np.max(np.abs(r)) < 5 * p.nu ** 0.5 / p.nu ** 0.25 * 10
    m = slow.phi_minus(z, 5)
    assert np.allclose(orr_apply(p, m), r, atol=1e-10 * np.max(np.abs(r)) + 1e-14)


def test_psi2_improves_residual(slow):
    z = np.linspace(0, 3, 301)
    assert np.max(np.abs(slow.orr_residual_minus(z))) < np.max(np.abs(slow.orr_residual_minus(z, False)))
