r"""Transition-dipole algebra and the k_y-integrated spectral kernel.

The quasi-static coupling of a dipole :math:`\gamma` to a surface mode with
in-plane wave vector :math:`\mathbf{k}_\parallel` is governed by

.. math::
    A(k_x, k_y) = \frac{|(\mathbf{k}_\parallel - i k_\parallel \hat z)\cdot\gamma|^2}{k_\parallel}.

Integrating :math:`e^{-2k_\parallel d} A` over :math:`k_y` gives a closed form
in modified Bessel functions (:func:`ky_reduced_kernel`), which turns every
spectral double integral in the library into a single :math:`k_x` integral.
"""
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .material import reflection
from .specfun import bessel_k012_scaled

__all__ = [
    "TransitionDipole",
    "pol_factor",
    "spin_y",
    "ky_reduced_kernel",
    "greens_kx_qs",
    "parse_dipole",
    "format_dipole",
]

_NORM_TOL = 1e-12
# Below this Bessel argument the small-kx limits are used directly.
_TINY_XI = 1e-150


@dataclass(frozen=True)
class TransitionDipole:
    """Complex transition dipole moment ``(gx, gy, gz)``.

    Stored normalized to unit norm; a :class:`UserWarning` is issued when
    the input norm differs from 1 by more than 1e-12.
    """

    gx: complex = 0j
    gy: complex = 0j
    gz: complex = 0j

    def __post_init__(self):
        comps = np.array([self.gx, self.gy, self.gz], dtype=complex)
        if not np.all(np.isfinite(comps)):
            raise DomainError("dipole components must be finite")
        norm2 = float(np.vdot(comps, comps).real)
        if norm2 == 0:
            raise DomainError("dipole moment must be nonzero")
        if abs(norm2 - 1.0) > _NORM_TOL:
            warnings.warn(
                f"dipole |gamma|^2 = {norm2:.15g}; normalizing to 1", stacklevel=3
            )
            comps = comps / np.sqrt(norm2)
        for name, val in zip(("gx", "gy", "gz"), comps):
            object.__setattr__(self, name, complex(val))

    @classmethod
    def linear(cls, axis):
        """Linearly polarized dipole along ``'x'``, ``'y'`` or ``'z'``."""
        comps = {"x": (1, 0, 0), "y": (0, 1, 0), "z": (0, 0, 1)}[axis]
        return cls(*comps)

    @classmethod
    def chiral(cls, handedness):
        """``(x + i*handedness*z)/sqrt(2)``; ``spin_y`` equals `handedness`."""
        if handedness not in (1, -1):
            raise DomainError("handedness must be +1 or -1")
        r = np.sqrt(0.5)
        return cls(r, 0, 1j * handedness * r)

    @property
    def vector(self):
        return np.array([self.gx, self.gy, self.gz], dtype=complex)

    @property
    def px(self):
        return abs(self.gx) ** 2

    @property
    def py(self):
        return abs(self.gy) ** 2

    @property
    def pz(self):
        return abs(self.gz) ** 2

    @property
    def s_y(self):
        return spin_y(self)

    def conj(self):
        return TransitionDipole(self.gx.conjugate(), self.gy.conjugate(), self.gz.conjugate())


def spin_y(dip):
    r"""Spin projection :math:`s_y = -i(\gamma\times\gamma^*)\cdot\hat y = -2\,\mathrm{Im}(\gamma_x\gamma_z^*)`.

    Lies in [-1, 1] for a normalized dipole; ``+1`` for ``(x + iz)/sqrt(2)``.
    """
    return -2.0 * (dip.gx * dip.gz.conjugate()).imag


def pol_factor(kx, ky, dip):
    """Polarization factor ``|(k - i|k| z).gamma|**2 / |k|`` (non-negative).

    Raises
    ------
    DomainError
        At the degenerate point ``kx = ky = 0``.
    """
    kx = np.asarray(kx, dtype=float)
    ky = np.asarray(ky, dtype=float)
    kpar = np.hypot(kx, ky)
    if np.any(kpar == 0):
        raise DomainError("pol_factor is undefined at kx = ky = 0")
    amp = kx * dip.gx + ky * dip.gy - 1j * kpar * dip.gz
    vals = (amp.real**2 + amp.imag**2) / kpar
    return vals if vals.ndim else float(vals)


def _bessel_terms(kx, d):
    """Return ``kx**2 K0``, ``kx**2 (K0 + K2)`` and ``kx*|kx| K1`` at 2|kx|d."""
    kx = np.asarray(kx, dtype=float)
    akx = np.abs(kx)
    xi = 2.0 * akx * d
    tiny = xi < _TINY_XI
    xs = np.where(tiny, 1.0, xi)
    k0s, k1s, _ = bessel_k012_scaled(xs)
    env = np.exp(-xs)
    k0 = k0s * env
    # x*K1(x) -> 1 as x -> 0; |kx| K1 = (xi K1) / (2d)
    xk1 = xs * k1s * env
    t0 = kx * kx * k0
    # kx^2 K2 = kx^2 K0 + |kx| K1 / d
    t02 = 2.0 * t0 + xk1 / (2.0 * d * d)
    t1 = np.sign(kx) * akx * xk1 / (2.0 * d)
    t0 = np.where(tiny, 0.0, t0)
    t02 = np.where(tiny, 1.0 / (2.0 * d * d), t02)
    t1 = np.where(tiny, 0.0, t1)
    return t0, t02, t1


def ky_reduced_kernel(kx, dip, d):
    r"""Integral of ``exp(-2|k|d) A(kx, ky)`` over ky, in closed form.

    .. math::
        W(k_x) = 2k_x^2\Big[(p_x - p_y)K_0(\xi) + \tfrac{p_y + p_z}{2}(K_0 + K_2)(\xi)
                 + \mathrm{sgn}(k_x)\, s_y K_1(\xi)\Big], \quad \xi = 2|k_x|d

    Parameters
    ----------
    kx : float or array_like
    dip : TransitionDipole
    d : float
        Atom height, > 0.

    Returns
    -------
    W : float or ndarray
        Non-negative; ``W(0) = (py + pz) / (2 d**2)``.
    """
    if not d > 0:
        raise DomainError("height d must be positive")
    t0, t02, t1 = _bessel_terms(kx, d)
    w = 2.0 * (dip.px - dip.py) * t0 + (dip.py + dip.pz) * t02 + 2.0 * dip.s_y * t1
    # W is an integral of a non-negative function; clip rounding residue.
    w = np.maximum(w, 0.0)
    return w if w.ndim else float(w)


def greens_kx_qs(kx, omega, metal, d):
    """k_y-integrated quasi-static reflected Green tensor at the atom position.

    Units are such that ``1/(4 pi eps0) = 1`` and wave numbers are in
    ``omega_sp/c``.  The contraction ``conj(gamma) . G . gamma`` equals
    ``-R(omega) * ky_reduced_kernel(kx, gamma, d)``.

    Returns
    -------
    G : ndarray, shape ``np.shape(kx) + (3, 3)``, complex
    """
    if not d > 0:
        raise DomainError("height d must be positive")
    kx = np.asarray(kx, dtype=float)
    t0, t02, t1 = _bessel_terms(kx, d)
    r = np.asarray(reflection(metal, np.broadcast_to(omega, kx.shape)))
    g = np.zeros(kx.shape + (3, 3), dtype=complex)
    g[..., 0, 0] = -r * 2.0 * t0
    g[..., 1, 1] = -r * (t02 - 2.0 * t0)
    g[..., 2, 2] = -r * t02
    g[..., 0, 2] = -r * (-2j) * t1
    g[..., 2, 0] = -g[..., 0, 2]
    return g


def _parse_complex(text):
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise ValueError(f"cannot parse complex number {text!r}") from None


def parse_dipole(text):
    """Parse ``"cx,cy,cz"`` (complex numbers like ``0.7+0i`` or ``-0.7i``)."""
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"expected three comma-separated components, got {text!r}")
    return TransitionDipole(*(_parse_complex(p.strip()) for p in parts))


def format_dipole(dip):
    """Inverse of :func:`parse_dipole`, 17 significant digits."""
    return ",".join(f"{c.real:.17g}{c.imag:+.17g}i" for c in dip.vector)
