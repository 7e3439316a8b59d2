import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chiralfriction import DomainError, DrudeMetal, QuadratureError, QuadratureSpec
from chiralfriction.quadrature import (
    GAUSS_WEIGHTS,
    KRONROD_WEIGHTS,
    NODES,
    Peak,
    PeakSet,
    integrate_2d,
    integrate_adaptive,
    integrate_semi_infinite,
    locate_peaks,
    peak_breakpoints,
)


def test_rule_exactness():
    for n in range(24):
        exact = 0.0 if n % 2 else 2.0 / (n + 1)
        assert KRONROD_WEIGHTS @ NODES**n == pytest.approx(exact, abs=1e-15)
    for n in range(14):
        exact = 0.0 if n % 2 else 2.0 / (n + 1)
        assert GAUSS_WEIGHTS @ NODES**n == pytest.approx(exact, abs=1e-15)
    # Gauss rule is not exact at degree 14
    assert abs(GAUSS_WEIGHTS @ NODES**14 - 2 / 15) > 1e-6


def test_smooth_integral():
    res = integrate_adaptive(np.cos, 0.0, 2.0)
    assert res.value == pytest.approx(math.sin(2.0), rel=1e-14)
    assert res.error <= 1e-8 * abs(res.value)


def test_narrow_lorentzian_with_breakpoints():
    width = 1e-6
    center = 0.3

    def f(x):
        return width / ((x - center) ** 2 + width**2)

    peaks = PeakSet((Peak(center, width),))
    pts = peak_breakpoints(peaks, 10.0, -5, 5)
    res = integrate_adaptive(f, -5.0, 5.0, points=pts)
    exact = math.atan((5 - center) / width) + math.atan((5 + center) / width)
    assert res.value == pytest.approx(exact, rel=1e-9)


@given(st.floats(-3, 3), st.floats(0.05, 5))
def test_semi_infinite_exponential(a, scale):
    spec = QuadratureSpec(rel_tol=1e-10)
    right = integrate_semi_infinite(lambda t: np.exp(-(t - a) / scale), a, 1, scale, spec)
    left = integrate_semi_infinite(lambda t: np.exp((t - a) / scale), a, -1, scale, spec)
    assert right.value == pytest.approx(scale, rel=1e-9)
    assert left.value == pytest.approx(scale, rel=1e-9)


def test_semi_infinite_gaussian_moment():
    res = integrate_semi_infinite(lambda t: t * t * np.exp(-t * t), 0.0, 1, 1.0)
    assert res.value == pytest.approx(math.sqrt(math.pi) / 4, rel=1e-10)


def test_semi_infinite_with_peak_point():
    width = 1e-4

    def f(t):
        return np.exp(-t) * width / ((t - 2) ** 2 + width**2)

    pts = peak_breakpoints(PeakSet((Peak(2.0, width),)), 10.0)
    res = integrate_semi_infinite(f, 0.0, 1, 1.0, points=pts)
    assert res.value == pytest.approx(math.pi * math.exp(-2.0), rel=1e-4)


def test_non_convergence_raises_with_partial_result():
    spec = QuadratureSpec(rel_tol=1e-14, abs_tol=1e-300, max_subdivisions=10)
    with pytest.raises(QuadratureError) as info:
        integrate_adaptive(lambda x: np.sin(1 / x), 1e-4, 1.0, spec)
    assert math.isfinite(info.value.value)
    assert info.value.error > 0


def test_non_finite_integrand_raises():
    with pytest.raises(QuadratureError):
        integrate_adaptive(lambda x: np.where(x > 0.5, np.nan, 1.0), 0, 1)


def test_deterministic():
    f = lambda x: np.exp(-x) * np.sin(40 * x)
    a = integrate_adaptive(f, 0, 3)
    b = integrate_adaptive(f, 0, 3)
    assert a == b


def test_argument_validation():
    with pytest.raises(DomainError):
        integrate_adaptive(np.cos, 1.0, 0.0)
    with pytest.raises(DomainError):
        integrate_adaptive(np.cos, 0.0, math.inf)
    with pytest.raises(DomainError):
        integrate_semi_infinite(np.cos, 0.0, 2, 1.0)
    with pytest.raises(DomainError):
        integrate_semi_infinite(np.cos, 0.0, 1, 0.0)
    with pytest.raises(DomainError):
        QuadratureSpec(rel_tol=0)
    with pytest.raises(DomainError):
        QuadratureSpec(max_subdivisions=3)


def test_locate_peaks():
    peaks = locate_peaks(DrudeMetal(0.2), 0.1, 0.05)
    wp = math.sqrt(0.99)
    assert peaks.centers == pytest.approx(((wp - 0.1) / 0.05, (-wp - 0.1) / 0.05))
    assert peaks.widths == pytest.approx((2.0, 2.0))
    assert not peaks.lossless
    lossless = locate_peaks(DrudeMetal(0.0), 0.1, 0.05)
    assert lossless.lossless and lossless.widths == (0.0, 0.0)
    with pytest.raises(DomainError):
        locate_peaks(DrudeMetal(0.2), 0.1, 0.0)


def test_breakpoints_sorted_and_clipped():
    peaks = PeakSet((Peak(0.0, 1.0), Peak(50.0, 0.5)))
    pts = peak_breakpoints(peaks, 10.0, -20, 60)
    assert pts == sorted(pts)
    assert all(-20 < p < 60 for p in pts)
    assert 0.0 in pts and 50.0 in pts and 45.0 in pts


def test_integrate_2d_separable():
    res = integrate_2d(lambda x, y: np.exp(-x) * np.cos(y) + 0 * y, (0, 1), (0, 1))
    assert res.value == pytest.approx((1 - math.exp(-1)) * math.sin(1), rel=1e-10)
