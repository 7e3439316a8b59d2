r"""Decay rates, friction force and population dynamics of a moving atom.

Everything is dimensionless: frequencies in :math:`\omega_{sp}`, wave numbers
in :math:`\omega_{sp}/c`, lengths in :math:`c/\omega_{sp}`, velocities in
:math:`c`, rates in :math:`\Gamma_0 = (\omega_{sp}/c)^3|\gamma|^2/(4\pi\varepsilon_0\hbar)`,
times in :math:`1/\Gamma_0` and forces in
:math:`|F_0| = (\omega_{sp}/c)^4|\gamma|^2/(4\pi\varepsilon_0)`.

With :math:`W(k_x)` the k_y-integrated kernel of
:func:`~chiralfriction.polarization.ky_reduced_kernel`, :math:`R` the
reflection coefficient and :math:`k_0 = -\omega_0/v`, the lossy (Drude)
results are

.. math::
    \Gamma^+ = \frac{1}{\pi}\int_{k_0}^{\infty} W\,(-\mathrm{Im}R)\,dk_x, \qquad
    \Gamma^- = \frac{1}{\pi}\int_{-\infty}^{k_0} W\,\mathrm{Im}R\,dk_x,

.. math::
    F = \frac{1}{\pi}\Big[P_e\int_{k_0}^{\infty} + (1-P_e)\int_{-\infty}^{k_0}\Big]
        k_x W\,\mathrm{Im}R\,dk_x,

with :math:`R` evaluated at the Doppler-shifted frequency
:math:`\omega_0 + k_x v`.  In the lossless limit :math:`\mathrm{Im}R` becomes a
pair of delta functions at :math:`k_{P,\pm} = -(\omega_0 \mp \omega_{sp})/v`
and the integrals collapse to closed forms in :math:`K_0, K_1, K_2`.
"""
import math
import warnings
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .errors import DegenerateRatesError, DomainError
from .material import DrudeMetal, im_reflection_real_axis
from .polarization import ky_reduced_kernel, pol_factor
from .quadrature import (
    DEFAULT_SPEC,
    QuadratureSpec,
    integrate_adaptive,
    integrate_semi_infinite,
    locate_peaks,
    peak_breakpoints,
)
from .specfun import UNDERFLOW_ARG

__all__ = [
    "NEGLIGIBLE_RATE",
    "GALILEAN_WARN_VELOCITY",
    "AtomKinematics",
    "DecayRates",
    "ForceValue",
    "TrajectoryPoint",
    "plasmon_wavenumbers",
    "decay_rates_lossless",
    "friction_force_lossless",
    "steady_state_force_lossless",
    "decay_rates_lossy",
    "decay_rates_lossy_2d",
    "friction_force_lossy",
    "friction_force_lossy_2d",
    "decay_rates",
    "friction_force",
    "steady_state_force",
    "ground_state_force",
    "excited_probability",
    "force_trajectory",
    "optimal_velocity",
    "optimal_frequency",
]

NEGLIGIBLE_RATE = 1e-280
GALILEAN_WARN_VELOCITY = 0.3
OPTIMAL_VELOCITY_MAX_D = 0.2

# Tolerances of the 2D cross-check integrator.
ORACLE_SPEC = QuadratureSpec(rel_tol=1e-9, abs_tol=1e-15, max_subdivisions=4000)


@dataclass(frozen=True)
class AtomKinematics:
    """Transition frequency, height and velocity of the atom.

    ``omega0 = 0`` is accepted as the degenerate end point of frequency
    scans; the velocity must lie in (0, 1) and triggers a warning above
    0.3 where the Galilean treatment becomes questionable.
    """

    omega0: float
    d: float
    v: float

    def __post_init__(self):
        if not self.omega0 >= 0:
            raise DomainError("omega0 must be non-negative")
        if not self.d > 0:
            raise DomainError("height d must be positive")
        if not 0 < self.v < 1:
            raise DomainError("velocity must satisfy 0 < v < 1 (units of c)")
        if self.v > GALILEAN_WARN_VELOCITY:
            warnings.warn(
                f"v = {self.v} > {GALILEAN_WARN_VELOCITY}: non-relativistic model strained",
                stacklevel=3,
            )

    @property
    def kx_threshold(self):
        """``-omega0/v``: the kx where the Doppler-shifted frequency vanishes."""
        return -self.omega0 / self.v

    def with_(self, **changes):
        return replace(self, **changes)


@dataclass(frozen=True)
class DecayRates:
    """Excited-to-ground (``gamma_plus``) and ground-to-excited
    (``gamma_minus``) transition rates in units of Gamma_0."""

    gamma_plus: float
    gamma_minus: float
    negligible_plus: bool = False
    negligible_minus: bool = False
    err_plus: float = 0.0
    err_minus: float = 0.0

    def __post_init__(self):
        if self.gamma_plus < 0 or self.gamma_minus < 0:
            raise DomainError("decay rates must be non-negative")

    @property
    def total(self):
        return self.gamma_plus + self.gamma_minus

    @property
    def degenerate(self):
        plus = self.negligible_plus or self.gamma_plus == 0
        minus = self.negligible_minus or self.gamma_minus == 0
        return plus and minus

    @property
    def pe_infinity(self):
        """Steady-state excited-state probability ``G- / (G- + G+)``."""
        if self.degenerate:
            raise DegenerateRatesError("both transition rates are negligible")
        return self.gamma_minus / self.total


@dataclass(frozen=True)
class ForceValue:
    """Friction force in units of ``|F0|`` (negative = drag).

    ``total = pe * excited_channel + (1 - pe) * ground_channel``.
    """

    total: float
    excited_channel: float
    ground_channel: float
    pe: float
    err_estimate: float = 0.0

    @classmethod
    def compose(cls, pe, excited, ground, err_excited=0.0, err_ground=0.0):
        pe = _check_probability(pe)
        total = pe * excited + (1.0 - pe) * ground
        err = pe * err_excited + (1.0 - pe) * err_ground
        return cls(total, excited, ground, pe, err)

    def with_pe(self, pe):
        """Same channel forces recombined for another excited-state probability."""
        pe = _check_probability(pe)
        return ForceValue(
            pe * self.excited_channel + (1.0 - pe) * self.ground_channel,
            self.excited_channel,
            self.ground_channel,
            pe,
            self.err_estimate,
        )


class TrajectoryPoint(NamedTuple):
    t: float
    pe: float
    force: ForceValue


def _check_probability(pe):
    pe = float(pe)
    if not 0.0 <= pe <= 1.0:
        raise DomainError(f"probability must lie in [0, 1], got {pe}")
    return pe


def plasmon_wavenumbers(kin, omega_sp=1.0):
    """Resonant plasmon wave numbers ``k_P,+- = -(omega0 -+ omega_sp)/v``.

    ``k_minus`` is always negative; ``k_plus`` is positive iff
    ``omega0 < omega_sp``.
    """
    k_plus = -(kin.omega0 - omega_sp) / kin.v
    k_minus = -(kin.omega0 + omega_sp) / kin.v
    return k_plus, k_minus


# --------------------------------------------------------------------------
# lossless limit

def _lossless_rate(k, kin, dip, omega_sp):
    xi = 2.0 * abs(k) * kin.d
    rate = omega_sp * ky_reduced_kernel(k, dip, kin.d) / (2.0 * kin.v)
    negligible = xi > UNDERFLOW_ARG or rate < NEGLIGIBLE_RATE
    return (0.0 if negligible else rate), negligible


def decay_rates_lossless(kin, dip, omega_sp=1.0):
    r"""Closed-form decay rates for a vanishingly lossy metal.

    .. math::
        \Gamma^\pm = \frac{k_{P,\pm}^2}{v}\Big[(p_x - p_y)K_0 + \frac{p_y+p_z}{2}(K_0+K_2)
                     + \mathrm{sgn}(k_{P,\pm})\,s_y K_1\Big](2|k_{P,\pm}|d)

    Rates below :data:`NEGLIGIBLE_RATE` are returned as exact zeros with the
    matching ``negligible_*`` flag set.
    """
    k_plus, k_minus = plasmon_wavenumbers(kin, omega_sp)
    gp, np_ = _lossless_rate(k_plus, kin, dip, omega_sp)
    gm, nm = _lossless_rate(k_minus, kin, dip, omega_sp)
    return DecayRates(gp, gm, negligible_plus=np_, negligible_minus=nm)


def _lossless_channels(kin, rates, omega_sp):
    k_plus, k_minus = plasmon_wavenumbers(kin, omega_sp)
    # F_e = -k_P+ G+ = (omega0 - omega_sp)/v G+,  F_g = k_P- G- = -(omega0 + omega_sp)/v G-
    return -k_plus * rates.gamma_plus, k_minus * rates.gamma_minus


def friction_force_lossless(kin, dip, pe, omega_sp=1.0):
    """Friction force for a vanishingly lossy metal.

    ``F = pe*(omega0 - 1)/v * G+ - (1 - pe)*(omega0 + 1)/v * G-`` in units
    of ``|F0|``.  The ground channel is never positive; the sign of the
    excited channel is unconstrained.
    """
    rates = decay_rates_lossless(kin, dip, omega_sp)
    excited, ground = _lossless_channels(kin, rates, omega_sp)
    return ForceValue.compose(pe, excited, ground)


def steady_state_force_lossless(kin, dip, omega_sp=1.0):
    """Force once the populations have relaxed: ``-(2/v) G- G+ / (G- + G+)``."""
    rates = decay_rates_lossless(kin, dip, omega_sp)
    if rates.degenerate:
        raise DegenerateRatesError("both transition rates are negligible")
    excited, ground = _lossless_channels(kin, rates, omega_sp)
    pe = rates.pe_infinity
    harmonic = rates.gamma_minus * rates.gamma_plus / rates.total
    total = -2.0 * omega_sp * harmonic / kin.v
    return ForceValue(total, excited, ground, pe)


# --------------------------------------------------------------------------
# lossy metal, k_y integral done analytically (1D) or numerically (2D)

def _check_lossy(metal):
    if metal.lossless:
        raise DomainError(
            "lossy routines need gamma_c > 0; use the lossless closed forms for gamma_c = 0"
        )


def _integrate_channel(g, kin, metal, spec, channel):
    """Integrate `g` over the excited (kx > -omega0/v) or ground domain."""
    kx0 = kin.kx_threshold
    scale = 1.0 / (2.0 * kin.d)
    pts = peak_breakpoints(locate_peaks(metal, kin.omega0, kin.v), spec.peak_padding)
    if channel == "ground":
        return integrate_semi_infinite(g, kx0, -1, scale, spec, points=pts)
    tail = integrate_semi_infinite(g, 0.0, 1, scale, spec, points=pts)
    if kx0 == 0.0:
        return tail
    head = integrate_adaptive(g, kx0, 0.0, spec, points=pts)
    return head.value + tail.value, head.error + tail.error


def _channel_integrands(kernel, kin, metal):
    def im_r(kx):
        return im_reflection_real_axis(metal, kin.omega0 + kx * kin.v)

    def rate_plus(kx):
        return -kernel(kx) * im_r(kx) / math.pi

    def rate_minus(kx):
        return kernel(kx) * im_r(kx) / math.pi

    def force(kx):
        return kx * kernel(kx) * im_r(kx) / math.pi

    return rate_plus, rate_minus, force


def _lossy_rates(kernel, kin, metal, spec):
    rate_plus, rate_minus, _ = _channel_integrands(kernel, kin, metal)
    gp, ep = _integrate_channel(rate_plus, kin, metal, spec, "excited")
    gm, em = _integrate_channel(rate_minus, kin, metal, spec, "ground")
    # integrands are pointwise non-negative; only round-off can go below 0
    gp, gm = max(gp, 0.0), max(gm, 0.0)
    return DecayRates(
        gp,
        gm,
        negligible_plus=gp < NEGLIGIBLE_RATE,
        negligible_minus=gm < NEGLIGIBLE_RATE,
        err_plus=ep,
        err_minus=em,
    )


def _lossy_force(kernel, kin, metal, pe, spec):
    pe = _check_probability(pe)
    _, _, force = _channel_integrands(kernel, kin, metal)
    fe, ee = _integrate_channel(force, kin, metal, spec, "excited")
    fg, eg = _integrate_channel(force, kin, metal, spec, "ground")
    # ground integrand is pointwise <= 0; clip round-off only
    return ForceValue.compose(pe, fe, min(fg, 0.0), ee, eg)


def _analytic_kernel(kin, dip):
    return lambda kx: ky_reduced_kernel(kx, dip, kin.d)


def _numeric_kernel(kin, dip, spec):
    """k_y integral of ``A * exp(-2|k|d)`` by adaptive quadrature, memoized."""
    d = kin.d
    cache = {}

    def one(kx):
        def f(ky):
            return pol_factor(kx, ky, dip) * np.exp(-2.0 * d * np.hypot(kx, ky))

        scale = 1.0 / (2.0 * d)
        right = integrate_semi_infinite(f, 0.0, 1, scale, spec)
        left = integrate_semi_infinite(f, 0.0, -1, scale, spec)
        return right.value + left.value

    def kernel(kx):
        kx = np.asarray(kx, dtype=float)
        out = np.empty_like(kx)
        for i, x in enumerate(kx.ravel()):
            key = float(x)
            if key not in cache:
                cache[key] = one(key)
            out.flat[i] = cache[key]
        return out

    return kernel


def decay_rates_lossy(kin, metal, dip, spec=DEFAULT_SPEC):
    """Decay rates over a Drude metal with ``gamma_c > 0`` (1D quadrature)."""
    _check_lossy(metal)
    return _lossy_rates(_analytic_kernel(kin, dip), kin, metal, spec)


def friction_force_lossy(kin, metal, dip, pe, spec=DEFAULT_SPEC):
    """Friction force over a Drude metal with ``gamma_c > 0`` (1D quadrature).

    Parameters
    ----------
    kin : AtomKinematics
    metal : DrudeMetal
    dip : TransitionDipole
    pe : float
        Excited-state probability in [0, 1].
    spec : QuadratureSpec, optional

    Returns
    -------
    ForceValue
        Both channels, their combination and the quadrature error estimate.
    """
    _check_lossy(metal)
    return _lossy_force(_analytic_kernel(kin, dip), kin, metal, pe, spec)


def decay_rates_lossy_2d(kin, metal, dip, spec=ORACLE_SPEC):
    """Same as :func:`decay_rates_lossy` with the k_y integral done numerically."""
    _check_lossy(metal)
    return _lossy_rates(_numeric_kernel(kin, dip, spec), kin, metal, spec)


def friction_force_lossy_2d(kin, metal, dip, pe, spec=ORACLE_SPEC):
    """Same as :func:`friction_force_lossy` with the k_y integral done numerically.

    Much slower; meant as an independent check of the Bessel reduction.
    """
    _check_lossy(metal)
    return _lossy_force(_numeric_kernel(kin, dip, spec), kin, metal, pe, spec)


# --------------------------------------------------------------------------
# model dispatch

def _is_lossless(metal):
    return metal is None or metal.lossless


def decay_rates(kin, dip, metal=None, spec=DEFAULT_SPEC):
    """Lossless closed form when `metal` is None or lossless, else quadrature."""
    if _is_lossless(metal):
        omega_sp = 1.0 if metal is None else metal.omega_sp
        return decay_rates_lossless(kin, dip, omega_sp)
    return decay_rates_lossy(kin, metal, dip, spec)


def friction_force(kin, dip, pe, metal=None, spec=DEFAULT_SPEC):
    """Friction force for either model (see :func:`decay_rates`)."""
    if _is_lossless(metal):
        omega_sp = 1.0 if metal is None else metal.omega_sp
        return friction_force_lossless(kin, dip, pe, omega_sp)
    return friction_force_lossy(kin, metal, dip, pe, spec)


def ground_state_force(kin, dip, metal=None, spec=DEFAULT_SPEC):
    """Ground-channel force alone (``pe = 0``), skipping the excited integral.

    Returns
    -------
    float
        Force in units of ``|F0|``, never positive.
    """
    if _is_lossless(metal):
        omega_sp = 1.0 if metal is None else metal.omega_sp
        return friction_force_lossless(kin, dip, 0.0, omega_sp).ground_channel
    _, _, force = _channel_integrands(_analytic_kernel(kin, dip), kin, metal)
    value, _ = _integrate_channel(force, kin, metal, spec, "ground")
    return min(value, 0.0)


def steady_state_force(kin, dip, metal=None, spec=DEFAULT_SPEC):
    """Force at the steady-state population ``pe = G-/(G- + G+)`` for either model."""
    if _is_lossless(metal):
        omega_sp = 1.0 if metal is None else metal.omega_sp
        return steady_state_force_lossless(kin, dip, omega_sp)
    rates = decay_rates_lossy(kin, metal, dip, spec)
    force = friction_force_lossy(kin, metal, dip, 0.0, spec)
    return force.with_pe(rates.pe_infinity)


# --------------------------------------------------------------------------
# dynamics

def excited_probability(t, pe0, rates):
    """Excited-state probability at time(s) `t` (units of 1/Gamma_0).

    ``Pe(t) = Pe(0) exp(-G t) + G-/G (1 - exp(-G t))`` with ``G = G+ + G-``.

    Raises
    ------
    DegenerateRatesError
        If both rates are zero or flagged negligible.
    """
    pe0 = _check_probability(pe0)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("times must be non-negative")
    p_inf = rates.pe_infinity
    decay = np.exp(-rates.total * t)
    pe = pe0 * decay + p_inf * (1.0 - decay)
    pe = np.clip(pe, 0.0, 1.0)
    return pe if pe.ndim else float(pe)


def force_trajectory(kin, dip, pe0, times, metal=None, spec=DEFAULT_SPEC):
    """Time series of populations and friction force.

    The rates and the two channel forces are computed once for the chosen
    model (lossless when `metal` is None or has ``gamma_c = 0``) and
    recombined with ``Pe(t)`` at every time.

    Returns
    -------
    list of TrajectoryPoint
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1:
        raise DomainError("times must be a 1-D sequence")
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise DomainError("times must be non-negative and sorted")
    rates = decay_rates(kin, dip, metal, spec)
    base = friction_force(kin, dip, 0.0, metal, spec)
    pes = np.atleast_1d(excited_probability(times, pe0, rates))
    return [TrajectoryPoint(float(t), float(p), base.with_pe(p)) for t, p in zip(times, pes)]


# --------------------------------------------------------------------------
# scaling-law estimates

def optimal_velocity(omega0, d, omega_sp=1.0):
    """Velocity maximizing the ground-state force, ``(4/7)(omega0 + omega_sp) d``.

    Comes from the maximum of ``u**3.5 exp(-2u)`` at ``u = 7/4``; only
    meaningful for ``omega_sp * d << 1`` (warns for ``d > 0.2``).
    """
    if d > OPTIMAL_VELOCITY_MAX_D:
        warnings.warn("optimal_velocity estimate assumes omega_sp*d << 1", stacklevel=2)
    return 4.0 / 7.0 * (omega0 + omega_sp) * d


def optimal_frequency(v, d, omega_sp=1.0):
    """Transition frequency maximizing the ground-state force,
    ``max(0, (5/4) v/d - omega_sp)``."""
    if not (v > 0 and d > 0):
        raise DomainError("v and d must be positive")
    return max(0.0, 1.25 * v / d - omega_sp)
