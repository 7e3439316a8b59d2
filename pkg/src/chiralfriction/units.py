"""Conversion between SI quantities and the dimensionless units of the library.

Frequencies are measured in the surface-plasmon frequency ``omega_sp``,
lengths in ``c/omega_sp``, velocities in ``c``, rates in
``Gamma_0 = (omega_sp/c)**3 |gamma|**2 / (4 pi eps0 hbar)`` and forces in
``F_0 = (omega_sp/c)**4 |gamma|**2 / (4 pi eps0)``, where ``|gamma|`` is the
transition dipole moment in C m.
"""
from dataclasses import dataclass

from scipy.constants import c, epsilon_0, hbar, pi

from .errors import DomainError

__all__ = ["UnitSystem"]


@dataclass(frozen=True)
class UnitSystem:
    """SI scales fixed by the plasmon frequency and the dipole moment.

    Parameters
    ----------
    omega_sp : float
        Surface-plasmon angular frequency in rad/s.
    dipole_moment : float, optional
        Transition dipole moment in C m; only needed for rate and force
        scales.  Default is one atomic unit (e a0).
    """

    omega_sp: float
    dipole_moment: float = 8.478353625e-30

    def __post_init__(self):
        if not (self.omega_sp > 0 and self.dipole_moment > 0):
            raise DomainError("omega_sp and dipole_moment must be positive")

    @property
    def length(self):
        """c/omega_sp in metres."""
        return c / self.omega_sp

    @property
    def rate(self):
        """Gamma_0 in 1/s."""
        return (self.omega_sp / c) ** 3 * self.dipole_moment**2 / (4 * pi * epsilon_0 * hbar)

    @property
    def time(self):
        return 1.0 / self.rate

    @property
    def force(self):
        """|F_0| in newtons."""
        return (self.omega_sp / c) ** 4 * self.dipole_moment**2 / (4 * pi * epsilon_0)

    def frequency_to_dimensionless(self, omega):
        return omega / self.omega_sp

    def length_to_dimensionless(self, d):
        return d / self.length

    def velocity_to_dimensionless(self, v):
        return v / c

    def describe(self):
        return {
            "omega_sp [rad/s]": self.omega_sp,
            "dipole_moment [C m]": self.dipole_moment,
            "length unit c/omega_sp [m]": self.length,
            "rate unit Gamma_0 [1/s]": self.rate,
            "force unit F_0 [N]": self.force,
        }
