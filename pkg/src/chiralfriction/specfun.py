r"""Modified Bessel functions of the second kind of order 0, 1 and 2.

Only real positive arguments are supported.  Two evaluation routes are used:

* ``x <= 2``: the ascending series

  .. math::
      K_0(x) = -\ln(x/2) I_0(x) + \sum_k \psi(k+1) \frac{(x^2/4)^k}{(k!)^2}

  and the matching series for :math:`K_1`;

* ``x > 2``: the integral representation
  :math:`K_\nu(x) = \int_0^\infty e^{-x\cosh t}\cosh(\nu t)\,dt` rewritten
  with :math:`s = \sqrt{2x}\sinh(t/2)`, which gives

  .. math::
      e^x K_0(x) = 2\int_0^\infty \frac{e^{-s^2}}{\sqrt{2x+s^2}}\,ds, \qquad
      e^x K_1(x) = 2\int_0^\infty \frac{e^{-s^2}(1+s^2/x)}{\sqrt{2x+s^2}}\,ds .

  The integrand is a Gaussian times a function analytic in a strip of
  half-width :math:`\sqrt{2x} \geq 2`, so the plain trapezoidal rule with
  step 1/4 converges to machine precision.

:math:`K_2` is always obtained from the recurrence
:math:`K_2 = K_0 + (2/x) K_1`.
"""
import numpy as np

from .errors import DomainError

__all__ = [
    "BESSEL_ORDERS",
    "UNDERFLOW_ARG",
    "bessel_k",
    "bessel_k_scaled",
    "bessel_k012_scaled",
]

BESSEL_ORDERS = (0, 1, 2)

# e^-700 ~ 1e-304; beyond this K_n underflows double precision.
UNDERFLOW_ARG = 700.0

_SERIES_MAX_ARG = 2.0
_SERIES_TERMS = 16
_EULER_GAMMA = 0.57721566490153286061

_TRAP_STEP = 0.25
_TRAP_NODES = np.arange(0.0, 6.5, _TRAP_STEP)
_TRAP_WEIGHTS = np.full(_TRAP_NODES.shape, 2.0 * _TRAP_STEP)
_TRAP_WEIGHTS[0] = _TRAP_STEP
_TRAP_WEIGHTS *= np.exp(-_TRAP_NODES**2)
_TRAP_S2 = _TRAP_NODES**2


def _series_coefficients(n):
    # columns: I0, sum psi(k+1) t^k/(k!)^2, I1/(x/2), sum (psi(k+1)+psi(k+2)) t^k/(k!(k+1)!)
    coef = np.zeros((n, 4))
    c0 = 1.0
    c1 = 1.0
    psi_a = -_EULER_GAMMA  # psi(k + 1)
    psi_b = 1.0 - _EULER_GAMMA  # psi(k + 2)
    for k in range(n):
        coef[k] = (c0, psi_a * c0, c1, (psi_a + psi_b) * c1)
        c0 /= (k + 1) * (k + 1)
        c1 /= (k + 1) * (k + 2)
        psi_a += 1.0 / (k + 1)
        psi_b += 1.0 / (k + 2)
    return coef


# t = x^2/4 <= 1 on the series range; 1/(16!)^2 ~ 2e-27
_SERIES_COEF = _series_coefficients(_SERIES_TERMS)
_SERIES_POWERS = np.arange(_SERIES_TERMS)


def _series_k01(x):
    t = 0.25 * x * x
    log_half = np.log(0.5 * x)
    i0, s0, i1, s1 = (t[:, None] ** _SERIES_POWERS @ _SERIES_COEF).T
    half = 0.5 * x
    k0 = -log_half * i0 + s0
    k1 = 1.0 / x + log_half * half * i1 - 0.5 * half * s1
    return k0, k1


def _trapezoid_k01_scaled(x):
    x = x[:, None]
    base = _TRAP_WEIGHTS / np.sqrt(2.0 * x + _TRAP_S2)
    k0 = base.sum(axis=1)
    k1 = (base * (1.0 + _TRAP_S2 / x)).sum(axis=1)
    return k0, k1


def _check_args(x):
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("Bessel K requires x > 0")
    return x


def bessel_k012_scaled(x):
    """Return ``exp(x) * K_n(x)`` for n = 0, 1, 2 at once.

    Parameters
    ----------
    x : float or array_like
        Strictly positive arguments.

    Returns
    -------
    k0, k1, k2 : ndarray
        Exponentially scaled values, same shape as `x`.
    """
    x = _check_args(x)
    shape = x.shape
    flat = x.ravel()
    k0 = np.empty_like(flat)
    k1 = np.empty_like(flat)
    small = flat <= _SERIES_MAX_ARG
    if small.any():
        xs = flat[small]
        a, b = _series_k01(xs)
        scale = np.exp(xs)
        k0[small] = a * scale
        k1[small] = b * scale
    large = ~small
    if large.any():
        k0[large], k1[large] = _trapezoid_k01_scaled(flat[large])
    k2 = k0 + 2.0 * k1 / flat
    return k0.reshape(shape), k1.reshape(shape), k2.reshape(shape)


def _check_order(order):
    if order not in BESSEL_ORDERS:
        raise DomainError(f"Bessel order must be one of {BESSEL_ORDERS}, got {order!r}")


def bessel_k_scaled(order, x):
    """Exponentially scaled ``exp(x) * K_order(x)``; never underflows."""
    _check_order(order)
    vals = bessel_k012_scaled(x)[order]
    return vals if vals.ndim else float(vals)


def bessel_k(order, x, *, with_flag=False):
    """Modified Bessel function of the second kind ``K_order(x)``.

    Parameters
    ----------
    order : {0, 1, 2}
    x : float or array_like
        Strictly positive argument(s).
    with_flag : bool, optional
        Also return a boolean mask marking arguments above
        :data:`UNDERFLOW_ARG`, where the returned value is an exact zero
        standing in for an exponentially negligible number.

    Raises
    ------
    DomainError
        If any ``x <= 0`` or the order is not 0, 1 or 2.
    """
    _check_order(order)
    x = _check_args(x)
    scaled = bessel_k012_scaled(x)[order]
    negligible = x > UNDERFLOW_ARG
    vals = np.where(negligible, 0.0, scaled * np.exp(-np.minimum(x, UNDERFLOW_ARG)))
    if vals.ndim == 0:
        vals = float(vals)
        negligible = bool(negligible)
    if with_flag:
        return vals, negligible
    return vals
