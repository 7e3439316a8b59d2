import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chiralfriction import DomainError, DrudeMetal, TransitionDipole
from chiralfriction.material import reflection
from chiralfriction.polarization import (
    format_dipole,
    greens_kx_qs,
    ky_reduced_kernel,
    parse_dipole,
    pol_factor,
    spin_y,
)
from chiralfriction.validation import numeric_ky_kernel

from conftest import DIPOLES, dipole_from

components = st.lists(st.floats(-1, 1), min_size=6, max_size=6).filter(
    lambda p: np.linalg.norm(p) > 1e-3
)

# ky integral of A exp(-2|k|d) at d = 0.1 by mpmath quadrature
GOLDEN_W = {
    ("z", -3.0): 53.08044584719019,
    ("z", 0.5): 50.48275841670404,
    ("z", 7.0): 46.33670915188241,
    ("x", -3.0): 13.995397654285128,
    ("x", 0.5): 1.2135345123510084,
    ("x", 7.0): 23.878195995791106,
    ("y", -3.0): 39.08504819290506,
    ("y", 0.5): 49.269223904353034,
    ("y", 7.0): 22.458513156091303,
    ("chiral+", -3.0): 10.08689283499462,
    ("chiral+", 0.5): 30.775068854962825,
    ("chiral+", 7.0): 66.54937099236459,
    ("chiral-", -3.0): 56.9889506664807,
    ("chiral-", 0.5): 20.92122407409222,
    ("chiral-", 7.0): 3.6655341553089333,
}


@pytest.mark.parametrize("key", sorted(GOLDEN_W))
def test_kernel_goldens(key):
    name, kx = key
    assert ky_reduced_kernel(kx, DIPOLES[name], 0.1) == pytest.approx(GOLDEN_W[key], rel=1e-13)


def test_dipole_normalization_warns():
    with pytest.warns(UserWarning):
        dip = TransitionDipole(1, 0, 1)
    assert np.linalg.norm(dip.vector) == pytest.approx(1.0, abs=1e-15)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        TransitionDipole.chiral(1)


def test_zero_dipole_rejected():
    with pytest.raises(DomainError):
        TransitionDipole(0, 0, 0)
    with pytest.raises(DomainError):
        TransitionDipole.chiral(2)


def test_spin_of_named_dipoles():
    assert spin_y(TransitionDipole.chiral(1)) == pytest.approx(1.0)
    assert spin_y(TransitionDipole.chiral(-1)) == pytest.approx(-1.0)
    for axis in "xyz":
        assert spin_y(TransitionDipole.linear(axis)) == 0.0


def test_pol_factor_examples():
    plus = TransitionDipole.chiral(1)
    # (x + iz)/sqrt2 couples to kx > 0 only when ky = 0
    assert pol_factor(2.0, 0.0, plus) == pytest.approx(4.0, rel=1e-15)
    assert pol_factor(-2.0, 0.0, plus) == pytest.approx(0.0, abs=1e-15)
    assert pol_factor(3.0, 4.0, TransitionDipole.linear("z")) == pytest.approx(5.0)
    assert pol_factor(3.0, 4.0, TransitionDipole.linear("x")) == pytest.approx(9 / 5)
    with pytest.raises(DomainError):
        pol_factor(0.0, 0.0, plus)


def test_kernel_at_origin():
    for name, dip in DIPOLES.items():
        expected = (dip.py + dip.pz) / (2 * 0.1**2)
        assert ky_reduced_kernel(0.0, dip, 0.1) == pytest.approx(expected, rel=1e-15)
        assert ky_reduced_kernel(1e-9, dip, 0.1) == pytest.approx(expected, rel=1e-6)


def test_kernel_rejects_bad_height():
    with pytest.raises(DomainError):
        ky_reduced_kernel(1.0, DIPOLES["z"], 0.0)


def test_kernel_vectorized():
    kx = np.linspace(-20, 20, 41)
    vec = ky_reduced_kernel(kx, DIPOLES["chiral-"], 0.07)
    loop = [ky_reduced_kernel(x, DIPOLES["chiral-"], 0.07) for x in kx]
    np.testing.assert_allclose(vec, loop, rtol=1e-13)


def test_kernel_underflows_cleanly():
    assert ky_reduced_kernel(1e5, DIPOLES["z"], 0.1) == 0.0


@given(components, st.floats(-80, 80), st.floats(0.01, 0.5))
def test_kernel_non_negative(parts, kx, d):
    assert ky_reduced_kernel(kx, dipole_from(parts), d) >= 0


@given(components, st.floats(-80, 80), st.floats(0.01, 0.5))
def test_conjugation_mirrors_kernel(parts, kx, d):
    dip = dipole_from(parts)
    a = ky_reduced_kernel(kx, dip.conj(), d)
    b = ky_reduced_kernel(-kx, dip, d)
    assert a == pytest.approx(b, rel=1e-12, abs=1e-300)


@given(components)
def test_spin_bounded(parts):
    assert -1 - 1e-12 <= spin_y(dipole_from(parts)) <= 1 + 1e-12


@given(components, st.floats(-50, 50), st.floats(-50, 50))
def test_pol_factor_non_negative(parts, kx, ky):
    if np.hypot(kx, ky) == 0:
        return
    assert pol_factor(kx, ky, dipole_from(parts)) >= 0


@pytest.mark.parametrize("seed", range(6))
def test_kernel_matches_numeric_ky_integral(seed):
    rng = np.random.default_rng(100 + seed)
    comps = rng.normal(size=3) + 1j * rng.normal(size=3)
    dip = TransitionDipole(*(comps / np.linalg.norm(comps)))
    kx = rng.uniform(-30, 30)
    d = rng.uniform(0.03, 0.3)
    assert ky_reduced_kernel(kx, dip, d) == pytest.approx(numeric_ky_kernel(kx, dip, d), rel=1e-9)


@given(components, st.floats(-30, 30), st.floats(0.3, 3))
def test_greens_contraction_equals_kernel(parts, kx, w):
    dip = dipole_from(parts)
    metal = DrudeMetal(0.2)
    d = 0.1
    g = greens_kx_qs(kx, w + 0.05j, metal, d)
    contraction = np.conj(dip.vector) @ g @ dip.vector
    expected = -reflection(metal, w + 0.05j) * ky_reduced_kernel(kx, dip, d)
    assert abs(contraction - expected) <= 1e-10 * max(abs(expected), 1e-300) + 1e-12


def test_greens_shape():
    g = greens_kx_qs(np.linspace(-1, 1, 5), 0.5j, DrudeMetal(0.1), 0.1)
    assert g.shape == (5, 3, 3)


def test_parse_dipole_formats():
    dip = parse_dipole("0.70710678118654757+0i,0+0i,0-0.70710678118654757i")
    assert dip.s_y == pytest.approx(-1.0)
    assert parse_dipole("0,0,1") == TransitionDipole.linear("z")
    with pytest.raises(ValueError):
        parse_dipole("1,0")
    with pytest.raises(ValueError):
        parse_dipole("1,foo,0")


@given(components)
def test_format_parse_round_trip(parts):
    dip = dipole_from(parts)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        back = parse_dipole(format_dipole(dip))
    np.testing.assert_allclose(back.vector, dip.vector, rtol=0, atol=1e-15)
