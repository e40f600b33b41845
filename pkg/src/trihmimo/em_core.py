"""Free-space Green's functions used by the tri-polarized channel model.

All routines are vectorized over numpy arrays and evaluated in double
precision. The constant ``i*omega*mu`` prefactor of the radiated field is
dropped everywhere, so channel matrices are defined up to one common complex
scale.
"""

from dataclasses import dataclass

import numpy as np

# below this |x| the sinc series is used instead of sin(x)/x
SINC_SERIES_THRESHOLD = 1e-4


class SingularityError(ValueError):
    """Raised when a Green's function is evaluated at coincident points."""


@dataclass(frozen=True)
class Wavenumber:
    """Free-space wavenumber built from a wavelength in meters."""

    wavelength: float

    def __post_init__(self):
        if not np.isfinite(self.wavelength) or self.wavelength <= 0:
            raise ValueError(f"wavelength must be positive, got {self.wavelength}")

    @property
    def k0(self) -> float:
        return 2.0 * np.pi / self.wavelength


@dataclass(frozen=True)
class DyadicCoeffs:
    c1: complex
    c2: complex


def sinc(x):
    """Unnormalized sinc, ``sin(x)/x`` with ``sinc(0) == 1``.

    Note this differs from :func:`numpy.sinc`, which is ``sin(pi x)/(pi x)``.
    """
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < SINC_SERIES_THRESHOLD
    safe = np.where(small, 1.0, x)
    x2 = x * x
    out = np.where(small, 1.0 - x2 / 6.0 + x2 * x2 / 120.0, np.sin(safe) / safe)
    return out[()] if out.ndim == 0 else out


def _separation(r, r_src):
    diff = np.asarray(r, dtype=float) - np.asarray(r_src, dtype=float)
    dist = np.linalg.norm(diff, axis=-1)
    if np.any(dist == 0):
        raise SingularityError("Green's function is singular at coincident points")
    return diff, dist


def scalar_green(r, r_src, k: Wavenumber):
    """Scalar free-space Green's function ``exp(i k0 d) / (4 pi d)``.

    Parameters
    ----------
    r, r_src : array_like, shape (..., 3)
        Field and source points in meters.
    k : Wavenumber

    Returns
    -------
    complex or ndarray of complex
    """
    _, d = _separation(r, r_src)
    g = np.exp(1j * k.k0 * d) / (4.0 * np.pi * d)
    return g[()] if np.ndim(g) == 0 else g


def radial_coeffs(k0r):
    """Array form of :func:`dyadic_coeffs`; returns ``(c1, c2)`` arrays."""
    x = np.asarray(k0r, dtype=float)
    if np.any(~(x > 0)):
        raise ValueError("k0*R must be strictly positive")
    inv = 1.0 / x
    inv2 = inv * inv
    c1 = 1.0 + 1j * inv - inv2
    c2 = 3.0 * inv2 - 3j * inv - 1.0
    return np.asarray(c1), np.asarray(c2)


def dyadic_coeffs(k0R: float) -> DyadicCoeffs:
    """Identity and radial weights of the dyadic Green's function at ``k0*R``."""
    c1, c2 = radial_coeffs(k0R)
    return DyadicCoeffs(complex(c1), complex(c2))


def dyadic_green(r, r_src, k: Wavenumber):
    """Dyadic free-space Green's function ``g * (c1 I + c2 r_hat r_hat^T)``.

    Broadcasts over leading dimensions of ``r`` and ``r_src``; the returned
    array has shape ``(..., 3, 3)`` and is symmetric in its last two axes.
    """
    diff, d = _separation(r, r_src)
    d = np.asarray(d)
    rhat = diff / d[..., None]
    g = np.asarray(np.exp(1j * k.k0 * d) / (4.0 * np.pi * d))
    c1, c2 = radial_coeffs(k.k0 * d)
    outer = rhat[..., :, None] * rhat[..., None, :]
    G = c1[..., None, None] * np.eye(3) + c2[..., None, None] * outer
    return g[..., None, None] * G
