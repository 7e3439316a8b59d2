"""Peak-aware adaptive quadrature.

The integrator is a globally adaptive 7/15-point Gauss-Kronrod scheme that
refines in batches: every iteration bisects the panels carrying the largest
error estimates and evaluates all new nodes in a single vectorized call of
the integrand.  Integrands must therefore accept and return 1-D numpy
arrays.  Panels are kept sorted by position and summed with ``math.fsum``
so results are bit-for-bit reproducible.

Narrow Lorentzian resonances are handled by passing breakpoints (see
:func:`locate_peaks` and :func:`peak_breakpoints`) so that every peak is
bracketed by panel edges before refinement starts.
"""
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, QuadratureError

__all__ = [
    "QuadratureSpec",
    "Peak",
    "PeakSet",
    "QuadResult",
    "integrate_adaptive",
    "integrate_semi_infinite",
    "integrate_2d",
    "locate_peaks",
    "peak_breakpoints",
]

# 15-point Kronrod abscissae on [-1, 1] (non-negative half, descending) with
# the 7-point Gauss rule embedded at the odd positions.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[1:7:2] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]
GAUSS_WEIGHTS[9:15:2] = _WG[2::-1]

_EPS = np.finfo(float).eps
_TINY = np.finfo(float).tiny


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and limits for the adaptive integrators.

    Attributes
    ----------
    rel_tol, abs_tol : float
        Convergence is declared when the summed error estimate is below
        ``max(rel_tol * |value|, abs_tol)``.
    max_subdivisions : int
        Maximum number of panels before giving up.
    peak_padding : float
        Breakpoints are placed at ``center +- peak_padding * width`` around
        every resonance.
    """

    rel_tol: float = 1e-8
    abs_tol: float = 1e-14
    max_subdivisions: int = 2000
    peak_padding: float = 10.0

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_subdivisions < 10:
            raise DomainError("max_subdivisions must be >= 10")
        if not self.peak_padding > 0:
            raise DomainError("peak_padding must be positive")


DEFAULT_SPEC = QuadratureSpec()


class QuadResult(NamedTuple):
    value: float
    error: float


@dataclass(frozen=True)
class Peak:
    center: float
    width: float


@dataclass(frozen=True)
class PeakSet:
    """Resonances of an integrand in the integration variable.

    ``lossless`` marks zero-width (delta-function) peaks, whose centers are
    still reported but which cannot be integrated numerically.
    """

    peaks: tuple
    lossless: bool = False

    def __post_init__(self):
        if not self.lossless and any(not p.width > 0 for p in self.peaks):
            raise DomainError("peak widths must be positive")

    def __iter__(self):
        return iter(self.peaks)

    def __len__(self):
        return len(self.peaks)

    @property
    def centers(self):
        return tuple(p.center for p in self.peaks)

    @property
    def widths(self):
        return tuple(p.width for p in self.peaks)


def locate_peaks(metal, omega0, v):
    """Reflection-coefficient resonances mapped onto the kx axis.

    The Doppler-shifted frequency ``omega0 + kx*v`` hits the damped plasmon
    poles ``+-omega_sp'`` at ``kx = (+-omega_sp' - omega0)/v``; the
    Lorentzian half width there is ``gamma_c / (2v)``.
    """
    if not v > 0:
        raise DomainError("velocity must be positive")
    wp = metal.omega_sp_prime
    width = metal.gamma_c / (2.0 * v)
    peaks = tuple(Peak((s * wp - omega0) / v, width) for s in (1.0, -1.0))
    return PeakSet(peaks, lossless=metal.lossless)


def peak_breakpoints(peaks, padding, lo=-math.inf, hi=math.inf):
    """Sorted breakpoints bracketing every peak, clipped to ``(lo, hi)``.

    Each peak contributes its center and points at ``padding``,
    ``10*padding`` and ``100*padding`` widths on both sides, so that both
    the core and the slowly decaying Lorentzian wings start on their own
    panels.
    """
    pts = set()
    for p in peaks:
        pts.add(p.center)
        if p.width > 0:
            for m in (padding, 10 * padding, 100 * padding):
                pts.add(p.center - m * p.width)
                pts.add(p.center + m * p.width)
    return sorted(x for x in pts if lo < x < hi)


def _gk15(f, lo, hi):
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = center[:, None] + half[:, None] * NODES
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        raise QuadratureError("integrand returned non-finite values", math.nan, math.inf)
    resk = fx @ KRONROD_WEIGHTS
    resg = fx @ GAUSS_WEIGHTS
    mean = 0.5 * resk
    resasc = np.abs(fx - mean[:, None]) @ KRONROD_WEIGHTS
    resabs = np.abs(fx) @ KRONROD_WEIGHTS
    ahalf = np.abs(half)
    value = resk * half
    err = np.abs((resk - resg) * half)
    resasc = resasc * ahalf
    resabs = resabs * ahalf
    # QUADPACK error scaling
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc != 0) & (err != 0), scaled, err)
    roundoff = 50.0 * _EPS * resabs
    err = np.where(resabs > _TINY / (50 * _EPS), np.maximum(roundoff, err), err)
    return value, err


def _adaptive(f, edges, spec):
    edges = np.asarray(edges, dtype=float)
    lo, hi = edges[:-1], edges[1:]
    val, err = _gk15(f, lo, hi)
    while True:
        total = math.fsum(val)
        toterr = math.fsum(err)
        tol = max(spec.rel_tol * abs(total), spec.abs_tol)
        if toterr <= tol:
            return QuadResult(total, toterr)
        n = len(lo)
        # panels that cannot be split further in double precision
        splittable = (hi - lo) > 8 * _EPS * np.maximum(np.abs(lo), np.abs(hi))
        budget = spec.max_subdivisions - n
        if budget <= 0 or not splittable.any():
            raise QuadratureError(
                f"no convergence after {n} panels (error {toterr:.3g} > tolerance {tol:.3g})",
                total,
                toterr,
            )
        cand = np.flatnonzero(splittable)
        order = cand[np.argsort(-err[cand], kind="stable")]
        excess = toterr - 0.5 * tol
        cum = np.cumsum(err[order])
        count = int(np.searchsorted(cum, excess)) + 1
        count = max(1, min(count, len(order), budget))
        chosen = np.sort(order[:count])
        mid = 0.5 * (lo[chosen] + hi[chosen])
        new_lo = np.concatenate([lo[chosen], mid])
        new_hi = np.concatenate([mid, hi[chosen]])
        new_val, new_err = _gk15(f, new_lo, new_hi)
        keep = np.ones(n, dtype=bool)
        keep[chosen] = False
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        val = np.concatenate([val[keep], new_val])
        err = np.concatenate([err[keep], new_err])
        idx = np.argsort(lo, kind="stable")
        lo, hi, val, err = lo[idx], hi[idx], val[idx], err[idx]


def integrate_adaptive(f, a, b, spec=DEFAULT_SPEC, *, points=()):
    """Integrate a vectorized `f` over the finite interval ``[a, b]``.

    Parameters
    ----------
    f : callable
        Maps a 1-D float array to an array of the same shape.
    a, b : float
        Finite limits, ``a < b``.
    spec : QuadratureSpec, optional
    points : iterable of float, optional
        Interior breakpoints (e.g. from :func:`peak_breakpoints`); points
        outside ``(a, b)`` are ignored.

    Returns
    -------
    QuadResult
        ``(value, error)`` with ``error <= max(rel_tol*|value|, abs_tol)``.

    Raises
    ------
    QuadratureError
        On non-convergence; the partial estimate is attached.
    """
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise DomainError("integrate_adaptive requires finite a < b")
    inner = sorted({float(p) for p in points if a < p < b})
    return _adaptive(f, [a, *inner, b], spec)


def _truncation_span(spec):
    # envelope exp(-u) below abs_tol with ~e^-70 headroom for prefactors
    return math.log(1.0 / spec.abs_tol) + 70.0


def integrate_semi_infinite(f, a, direction, decay_scale, spec=DEFAULT_SPEC, *, points=()):
    """Integrate `f` over ``[a, inf)`` (``direction=+1``) or ``(-inf, a]`` (``-1``).

    `f` must decay at least like ``exp(-|t - a| / decay_scale)``.  The range
    is truncated where that envelope is negligible against ``abs_tol`` and
    the rest is mapped onto a finite interval by ``t = a + L*s/(1-s)``,
    ``L = decay_scale``, before adaptive integration.  Breakpoints are
    mapped along with the range.
    """
    if direction not in (1, -1, "+", "-"):
        raise DomainError("direction must be +1 or -1")
    sign = 1.0 if direction in (1, "+") else -1.0
    if not decay_scale > 0:
        raise DomainError("decay_scale must be positive")
    a = float(a)
    scale = float(decay_scale)
    u_max = _truncation_span(spec)
    s_max = u_max / (1.0 + u_max)

    def g(s):
        one_minus = 1.0 - s
        t = a + sign * scale * s / one_minus
        return f(t) * (scale / (one_minus * one_minus))

    mapped = []
    for p in points:
        u = sign * (float(p) - a) / scale
        if 0 < u < u_max:
            mapped.append(u / (1.0 + u))
    return integrate_adaptive(g, 0.0, s_max, spec, points=mapped)


def integrate_2d(f, x_range, y_range, spec=DEFAULT_SPEC, *, x_points=(), y_points=()):
    """Iterated adaptive integral of ``f(x, y)`` over a rectangle.

    Used only as a cross-check.  Both ranges are finite ``(lo, hi)`` pairs;
    `f` is called with a scalar `x` and a 1-D array of `y`.
    """

    def outer(xs):
        return np.array([
            integrate_adaptive(lambda y, x=x: f(x, y), *y_range, spec, points=y_points).value
            for x in xs
        ])

    return integrate_adaptive(outer, *x_range, spec, points=x_points)
