import pytest
from scipy.constants import c, epsilon_0, hbar, pi

from chiralfriction import DomainError
from chiralfriction.units import UnitSystem


def test_scales():
    u = UnitSystem(omega_sp=1e16, dipole_moment=1e-29)
    k = 1e16 / c
    assert u.length == pytest.approx(c / 1e16)
    assert u.rate == pytest.approx(k**3 * 1e-58 / (4 * pi * epsilon_0 * hbar))
    assert u.force == pytest.approx(k**4 * 1e-58 / (4 * pi * epsilon_0))
    assert u.time * u.rate == pytest.approx(1.0)
    # hbar Gamma_0 k_sp / F_0 = 1 fixes the force prefactor
    assert hbar * u.rate * k / u.force == pytest.approx(1.0, rel=1e-14)


def test_conversions():
    u = UnitSystem(omega_sp=2e15)
    assert u.frequency_to_dimensionless(1e15) == 0.5
    assert u.length_to_dimensionless(u.length * 0.1) == pytest.approx(0.1)
    assert u.velocity_to_dimensionless(0.01 * c) == pytest.approx(0.01)


def test_validation():
    with pytest.raises(DomainError):
        UnitSystem(0.0)
    with pytest.raises(DomainError):
        UnitSystem(1e15, -1.0)
