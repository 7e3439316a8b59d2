r"""Drude metal: permittivity and quasi-static TM reflection coefficient.

All frequencies are in units of the surface-plasmon frequency, so a
normalized metal has ``omega_sp = 1``.  The permittivity is

.. math::
    \varepsilon(\omega) = 1 - \frac{2\omega_{sp}^2}{\omega(\omega + i\Gamma_c)}

and the short-wavelength TM reflection coefficient
:math:`R = -(\varepsilon - 1)/(\varepsilon + 1)` reduces to
:math:`R = \omega_{sp}^2 / (\omega(\omega + i\Gamma_c) - \omega_{sp}^2)`.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PoleError

__all__ = [
    "POLE_EXCLUSION_RADIUS",
    "DrudeMetal",
    "permittivity",
    "reflection",
    "reflection_pole_form",
    "reflection_poles",
    "im_reflection_real_axis",
]

POLE_EXCLUSION_RADIUS = 1e-8


@dataclass(frozen=True)
class DrudeMetal:
    """Drude metal with surface-plasmon frequency and collision rate.

    Parameters
    ----------
    gamma_c : float
        Collision (damping) rate, ``0 <= gamma_c < 2 * omega_sp``.
        ``gamma_c == 0`` is the lossless limit.
    omega_sp : float
        Surface-plasmon resonance frequency (1 in normalized units).
    """

    gamma_c: float = 0.0
    omega_sp: float = 1.0

    def __post_init__(self):
        if not self.omega_sp > 0:
            raise DomainError("omega_sp must be positive")
        if not 0 <= self.gamma_c < 2 * self.omega_sp:
            raise DomainError("gamma_c must satisfy 0 <= gamma_c < 2*omega_sp")

    @property
    def omega_sp_prime(self):
        """Damped resonance frequency ``sqrt(omega_sp**2 - (gamma_c/2)**2)``."""
        return float(np.sqrt(self.omega_sp**2 - 0.25 * self.gamma_c**2))

    @property
    def lossless(self):
        return self.gamma_c == 0


def _near(omega, points):
    omega = np.asarray(omega)
    return any(np.any(np.abs(omega - p) < POLE_EXCLUSION_RADIUS) for p in points)


def _out(vals):
    return vals if np.ndim(vals) else complex(vals)


def permittivity(metal, omega):
    """Drude permittivity at (complex) frequency `omega`.

    Raises
    ------
    PoleError
        Within :data:`POLE_EXCLUSION_RADIUS` of ``0`` or ``-i*gamma_c``.
    """
    omega = np.asarray(omega, dtype=complex)
    if _near(omega, (0.0, -1j * metal.gamma_c)):
        raise PoleError("permittivity has poles at omega = 0 and omega = -i*gamma_c")
    return _out(1.0 - 2.0 * metal.omega_sp**2 / (omega * (omega + 1j * metal.gamma_c)))


def reflection_poles(metal):
    """The two poles ``+-omega_sp' - i*gamma_c/2`` of the reflection coefficient."""
    wp = metal.omega_sp_prime
    half = 0.5 * metal.gamma_c
    return (complex(wp, -half), complex(-wp, -half))


def reflection(metal, omega):
    r"""Quasi-static TM reflection coefficient :math:`-(\varepsilon-1)/(\varepsilon+1)`.

    Evaluated in the cleared rational form, so it is finite at ``omega = 0``
    (perfect-conductor value ``-1``).

    Raises
    ------
    PoleError
        Where ``epsilon(omega) = -1``.
    """
    omega = np.asarray(omega, dtype=complex)
    if _near(omega, reflection_poles(metal)):
        raise PoleError("reflection coefficient is singular where epsilon = -1")
    wsp2 = metal.omega_sp**2
    return _out(wsp2 / (omega * (omega + 1j * metal.gamma_c) - wsp2))


def reflection_pole_form(metal, omega):
    """Reflection coefficient written as a sum of two simple poles."""
    omega = np.asarray(omega, dtype=complex)
    if _near(omega, reflection_poles(metal)):
        raise PoleError("reflection coefficient is singular where epsilon = -1")
    wp = metal.omega_sp_prime
    half = 0.5j * metal.gamma_c
    g = 1.0 / (wp - half - omega) + 1.0 / (wp + half + omega)
    return _out(-(metal.omega_sp**2 / (2.0 * wp)) * g)


def im_reflection_real_axis(metal, omega):
    """Closed-form ``Im R(omega)`` for real `omega`.

    Odd in `omega` and negative for ``omega > 0``.

    Raises
    ------
    PoleError
        For a lossless metal at ``omega = +-omega_sp``, where ``Im R`` is a
        delta distribution (use the lossless formulas instead).
    """
    omega = np.asarray(omega, dtype=float)
    wsp2 = metal.omega_sp**2
    if metal.lossless:
        if _near(omega, (metal.omega_sp, -metal.omega_sp)):
            raise PoleError("Im R is a delta function at +-omega_sp for a lossless metal")
        vals = np.zeros_like(omega)
    else:
        g = metal.gamma_c
        vals = -wsp2 * g * omega / ((omega * omega - wsp2) ** 2 + (g * omega) ** 2)
    return vals if vals.ndim else float(vals)
