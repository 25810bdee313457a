import mpmath as mp
import numpy as np
import pytest

from osgreen.special import (AI0, AIP0, BI0, BIP0, MAX_ABS_Z, AiryRangeError, TietjensPoleError, airy_ai,
                             airy_all, airy_bi, airy_ci, airy_primitive, ci_all, tietjens)

mp.mp.dps = 160


def _ref(z):
    """Ai, Ai', Ai(1, z), Ai(2, z) from mpmath (primitives decaying at +inf)."""
    z = mp.mpc(z)
    a2_0 = -mp.airyai(0, derivative=1)
    ai1 = mp.airyai(z, derivative=-1) - mp.mpf(1) / 3
    ai2 = mp.airyai(z, derivative=-2) - z / 3 + a2_0
    return [complex(mp.airyai(z)), complex(mp.airyai(z, derivative=1)), complex(ai1), complex(ai2)]


@pytest.mark.parametrize("r", [0.3, 2.0, 5.0, 9.0, 16.0, 30.0])
@pytest.mark.parametrize("th", [0.0, 0.7, 1.5, 2.2, 3.0, -1.1, -2.6])
def test_against_mpmath(r, th):
    z = r * np.exp(1j * th)
    got = airy_all(np.array([z]))
    for g, ref in zip(got, _ref(z)):
        assert abs(g[0] - ref) <= 1e-10 * abs(ref)


def test_constants():
    assert AI0 == pytest.approx(float(mp.airyai(0)), rel=1e-15)
    assert AIP0 == pytest.approx(float(mp.airyai(0, derivative=1)), rel=1e-15)
    assert BI0 == pytest.approx(float(mp.airybi(0)), rel=1e-15)
    assert BIP0 == pytest.approx(float(mp.airybi(0, derivative=1)), rel=1e-15)
    _, _, ai1, ai2 = airy_all(np.array([0.0]))
    assert ai1[0] == pytest.approx(-1 / 3)
    assert ai2[0] == pytest.approx(-AIP0)


def test_bi_and_ci():
    z = np.array([0.5 + 0.2j, -3.0 + 1.0j, 2.0 - 4.0j])
    b = airy_bi(z)
    for zz, v in zip(z, b.value):
        assert abs(v - complex(mp.airybi(zz))) <= 1e-12 * abs(v)
    ci = airy_ci(z).value
    a = airy_all(z)[0]
    assert np.allclose(ci, -1j * np.pi * (a + 1j * b.value), rtol=1e-12)
    c = ci_all(z)
    # Ci(1)' = Ci via central difference
    h = 1e-5
    d = (ci_all(z + h)[2] - ci_all(z - h)[2]) / (2 * h)
    assert np.allclose(d, c[0], rtol=1e-8)


def test_scalar_wrappers_and_primitive():
    v = airy_ai(1.0)
    assert isinstance(v.value, complex)
    assert v.value == pytest.approx(float(mp.airyai(1)))
    assert airy_primitive("Ai", 2, 1.0) == pytest.approx(airy_all(1.0)[3])
    with pytest.raises(ValueError):
        airy_primitive("Ai", 3, 1.0)
    with pytest.raises(ValueError):
        airy_primitive("Bi", 1, 1.0)


def test_range_error():
    with pytest.raises(AiryRangeError):
        airy_all(np.array([MAX_ABS_Z + 1.0]))


def test_tietjens_pole():
    from osgreen.oracle import muller

    f = lambda t: complex(airy_all(np.array([t]))[3][0])  # noqa: E731
    z0, _ = muller(f, -4.6 + 2.2j, -4.8 + 2.3j, -4.7 + 2.25j, tol=1e-15)
    with pytest.raises(TietjensPoleError) as e:
        tietjens(z0)
    assert e.value.abs_denominator < 1e-13
    t = tietjens(np.array([1.0 + 1.0j]))
    a = airy_all(np.array([1.0 + 1.0j]))
    assert t[0] * a[3][0] == pytest.approx(a[2][0])


def test_spec_examples():
    v = airy_ai(0.0)
    assert v.value == pytest.approx(0.3550280539, abs=1e-10)
    assert v.derivative == pytest.approx(-0.2588194038, abs=1e-10)
    z = 1 + 0.5j
    a, b = airy_ai(z), airy_bi(z)
    assert abs(a.value * b.derivative - a.derivative * b.value - 1 / np.pi) < 1e-10
    assert airy_ci(0.0).value == pytest.approx(1.93185 - 1.11536j, abs=1e-5)
    zs = np.array([0.3 - 0.2j, 2 + 2j])
    assert np.allclose(airy_ci(zs).value + 1j * np.pi * airy_ai(zs).value, np.pi * airy_bi(zs).value, rtol=1e-12)
    w = np.exp(1j * np.pi / 6)
    assert abs(airy_ci(10 * w).value) > abs(airy_ci(5 * w).value)
    assert abs(airy_ai(10 * w).value) < abs(airy_ai(5 * w).value)
    assert abs(airy_primitive("Ai", 1, 20.0)) < 1e-12
    t0 = tietjens(0.0)
    assert t0 == pytest.approx(airy_primitive("Ai", 1, 0.0) / airy_primitive("Ai", 2, 0.0))
    for x in (20.0, 40.0):
        assert tietjens(x) == pytest.approx(-np.sqrt(x), rel=2.0 / x ** 1.5)


def test_fd_derivative_consistency():
    z = np.array([0.4 + 0.1j, -2.0 + 3.0j, 6.0 - 1.0j])
    for h in (1e-3, 5e-4):
        fd = (airy_all(z + h)[0] - airy_all(z - h)[0]) / (2 * h)
        assert np.all(np.abs(fd - airy_all(z)[1]) <= 10 * h ** 2 * (1 + np.abs(z)) ** 2 * np.abs(airy_all(z)[0]))
