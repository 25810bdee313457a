import numpy as np
import pytest
from conftest import default_params

from osgreen.airysolve import AiryLayer


@pytest.fixture(scope="module")
def layer():
    return AiryLayer(default_params(1e-4))


def test_green_primitives_are_primitives(layer):
    x = 0.3
    y = np.linspace(0, 1, 2001)
    G = layer.green(x, y)
    G1, G2 = layer.green_primitives(x, y)
    h = y[1] - y[0]
    away = np.abs(y[1:-1] - x) > 0.01
    d2 = (G2[2:] - 2 * G2[1:-1] + G2[:-2]) / h ** 2
    d1 = (G1[2:] - G1[:-2]) / (2 * h)
    scale = np.abs(G).max()
    assert np.max(np.abs(d2 - G[1:-1])[away]) < 1e-3 * scale
    assert np.max(np.abs(d1 + G[1:-1])[away]) < 1e-3 * scale


def test_solve_inverts_airy_operator(layer):
    p = layer.params
    f = lambda t: np.exp(-(((t - 0.5) / 0.1) ** 2))  # noqa: E731
    z = np.linspace(0.01, 1.5, 300)
    m = layer.solve(f, z, support=(0, 3))
    u, du, v, dv = m.d
    h = z[1] - z[0]
    assert np.max(np.abs((u[2:] - 2 * u[1:-1] + u[:-2]) / h ** 2 - v[1:-1])) < 1e-3 * np.abs(v).max()
    U = p.profile.eval(z.astype(complex))
    vpp = (dv[2:] - dv[:-2]) / (2 * h)
    Av = -p.eps * vpp + (U[1:-1] - p.c) * v[1:-1]
    assert np.max(np.abs(Av - f(z[1:-1]))) < 1e-3
