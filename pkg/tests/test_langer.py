import numpy as np
import pytest
from conftest import default_params

from osgreen.langer import LangerMap, airy_operator_residual
from osgreen.special import AI0, airy_all


@pytest.fixture(scope="module")
def lm():
    return LangerMap(default_params(1e-4))


def test_g_fixes_critical_layer(lm):
    p = lm.params
    g, gp = lm.g_and_prime(p.z_c)
    assert abs(g - p.z_c) < 1e-12 and abs(gp - 1) < 1e-12


def test_C1_matches_B1_and_refinement(lm):
    z = np.linspace(0, lm.params.sigma1, 40)
    g, _ = lm.g_and_prime(z)
    c1 = lm.C1_direct(z)
    assert np.max(np.abs(lm.B1(g) - c1) / np.abs(c1)) < 1e-12
    assert np.max(np.abs(lm.C1_direct(z, n=256) - c1) / np.abs(c1)) < 1e-13


def test_tilde_ai_value_and_residual(lm):
    p = lm.params
    assert lm.tilde("ai", [p.z_c], 0).value[0] == pytest.approx(AI0, abs=1e-14)
    z = np.linspace(0, p.sigma1, 50)
    ti = lm.tilde("ai", z, 2)
    res = airy_operator_residual(p, ti, z)
    # the residual is -eps g''-type correction times Ai: compare with its leading form
    ai = airy_all(lm.zeta(z).value)[0]
    pred = -p.eps * lm.fpp(z) * ai
    assert np.max(np.abs(res - pred)) <= 1e-9 * np.max(np.abs(res))


def test_log_derivative_matches_fast_rate(lm):
    p = lm.params
    d = lm.tilde("ai", [p.sigma1], 2).derivatives(2)
    ld = d[1][0] / d[0][0]
    assert abs(ld + p.mu_f(p.sigma1)) <= 0.02 * abs(p.mu_f(p.sigma1))
