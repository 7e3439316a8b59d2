import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chiralfriction import DomainError
from chiralfriction.specfun import bessel_k, bessel_k012_scaled, bessel_k_scaled

# e^x K_n(x) from mpmath at 30 digits
GOLDEN_SCALED = {
    1e-6: (13.931456005075459, 1000000.9999932842, 2000002000000.5),
    1e-3: (7.030716002378251, 1000.9967345590685, 2002000.4998341394),
    0.1: (2.6823261022628944, 10.890182683049696, 220.48597976325684),
    1.0: (1.144463079806895, 1.6361534862632583, 4.416770052333412),
    2.0: (0.8415682150707714, 1.0334768470686886, 1.87504506213946),
    2.5: (0.7595486903280996, 0.900174423907878, 1.479688229454402),
    5.0: (0.547807564313519, 0.6002738587883126, 0.787917107828844),
    20.0: (0.27854487665718225, 0.28542549694072644, 0.30708742635125486),
    100.0: (0.12517562165912657, 0.12579995047957854, 0.12769162066871814),
    700.0: (0.04736236945461357, 0.04739618765349454, 0.047497787133623556),
}


@pytest.mark.parametrize("x", sorted(GOLDEN_SCALED))
def test_scaled_values_match_mpmath(x):
    got = bessel_k012_scaled(x)
    np.testing.assert_allclose(got, GOLDEN_SCALED[x], rtol=2e-15)


def test_unit_argument_goldens():
    assert bessel_k(0, 1.0) == pytest.approx(0.42102443824070834, rel=1e-14)
    assert bessel_k(1, 1.0) == pytest.approx(0.6019072301972346, rel=1e-14)


def test_dense_grid_against_mpmath():
    xs = np.geomspace(1e-6, 690, 300)
    k0, k1, k2 = bessel_k012_scaled(xs)
    for n, got in enumerate((k0, k1, k2)):
        ref = np.array([float(mpmath.besselk(n, x) * mpmath.exp(x)) for x in xs])
        assert np.max(np.abs(got / ref - 1)) < 2e-15


def test_branch_boundary_is_continuous():
    # series below 2, integral representation above
    lo = np.array(bessel_k012_scaled(np.nextafter(2.0, 0)))
    hi = np.array(bessel_k012_scaled(np.nextafter(2.0, 3)))
    np.testing.assert_allclose(lo, hi, rtol=1e-14)


def test_recurrence_holds():
    xs = np.geomspace(1e-4, 100, 500)
    k0, k1, k2 = (bessel_k(n, xs) for n in (0, 1, 2))
    assert np.max(np.abs(k2 - k0 - 2 * k1 / xs) / k2) < 1e-14


def test_underflow_returns_zero_with_flag():
    vals, flag = bessel_k(1, np.array([10.0, 700.0, 701.0, 1e4]), with_flag=True)
    assert list(flag) == [False, False, True, True]
    assert vals[2] == 0.0 and vals[3] == 0.0
    assert vals[1] > 0


def test_scalar_in_scalar_out():
    assert isinstance(bessel_k(0, 0.5), float)
    assert isinstance(bessel_k_scaled(2, 0.5), float)
    assert bessel_k(1, np.array([0.5, 1.0])).shape == (2,)


@pytest.mark.parametrize("x", [0.0, -1.0, np.nan])
def test_nonpositive_argument_rejected(x):
    with pytest.raises(DomainError):
        bessel_k(0, x)


def test_bad_order_rejected():
    with pytest.raises(DomainError):
        bessel_k(3, 1.0)


def test_large_argument_asymptotics():
    x = np.array([200.0, 500.0])
    k0, k1, _ = bessel_k012_scaled(x)
    lead = np.sqrt(np.pi / (2 * x))
    np.testing.assert_allclose(k0, lead * (1 - 1 / (8 * x) + 9 / (128 * x**2)), rtol=1e-7)
    np.testing.assert_allclose(k1, lead * (1 + 3 / (8 * x) - 15 / (128 * x**2)), rtol=1e-7)


def test_small_argument_asymptotics():
    x = 1e-8
    assert bessel_k(0, x) == pytest.approx(-np.log(x / 2) - np.euler_gamma, rel=1e-12)
    assert bessel_k(1, x) == pytest.approx(1 / x, rel=1e-12)


@given(st.floats(1e-6, 600))
def test_ordering_k0_k1_k2(x):
    k0, k1, k2 = bessel_k012_scaled(x)
    assert 0 < k0 < k1 < k2


@given(st.floats(1e-6, 600), st.floats(1.0001, 3.0))
def test_strictly_decreasing(x, factor):
    y = min(x * factor, 699.0)
    if y <= x:
        return
    for n in (0, 1, 2):
        assert bessel_k(n, y) < bessel_k(n, x)


def test_no_warnings_on_valid_input():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        bessel_k012_scaled(np.geomspace(1e-6, 700, 50))
