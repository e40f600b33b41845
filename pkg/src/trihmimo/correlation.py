"""Transmit-side spatial correlation from the imaginary part of the dyadic Green's function.

For two patches separated by ``d`` with coordinate difference ``c`` along a
polarization axis, the imaginary part of that diagonal Green's entry (with
the ``1/4pi`` prefactor omitted) is ``k0 * [A(k0 d) + (c/d)**2 B(k0 d)]``
where

    A(x) = sin x / x + cos x / x**2 - sin x / x**3
    B(x) = 3 sin x / x**3 - 3 cos x / x**2 - sin x / x

Summing the three axes and dividing by ``12 pi`` reduces to
``k0/(6 pi) * sinc(k0 d)``. The printed small-separation expansion
``k0/(6 pi) + k0**3 d**2 / (288 pi)`` is kept as a separate function; it does
not agree with that reduction beyond the constant term.

Receive-side correlation follows by reciprocity from the same functions.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .em_core import Wavenumber, sinc

# k0*d below which the six-term expression is replaced by its Maclaurin series
SERIES_THRESHOLD = 1e-2

_A_SERIES = (2.0 / 3.0, -2.0 / 15.0, 1.0 / 140.0, -1.0 / 5670.0, 1.0 / 399168.0)
_B_SERIES = (0.0, 1.0 / 15.0, -1.0 / 210.0, 1.0 / 7560.0, -1.0 / 498960.0)


def _even_poly(coeffs, x):
    x2 = x * x
    out = np.zeros_like(x)
    for c in reversed(coeffs):
        out = out * x2 + c
    return out


def _radial_parts(x):
    small = x < SERIES_THRESHOLD
    xs = np.where(small, 1.0, x)
    s, c = np.sin(xs), np.cos(xs)
    A = s / xs + c / xs**2 - s / xs**3
    B = 3 * s / xs**3 - 3 * c / xs**2 - s / xs
    A = np.where(small, _even_poly(_A_SERIES, x), A)
    B = np.where(small, _even_poly(_B_SERIES, x), B)
    return A, B


def corr_exact_component(d, offset, k: Wavenumber):
    """Imaginary part of one diagonal dyadic Green's entry, ``1/4pi`` omitted.

    Parameters
    ----------
    d : float or ndarray
        Patch separation in meters, ``d > 0``.
    offset : float or ndarray
        Coordinate difference along the component's axis, ``|offset| <= d``.
    k : Wavenumber

    Returns
    -------
    float or ndarray
    """
    d = np.asarray(d, dtype=float)
    offset = np.asarray(offset, dtype=float)
    if np.any(~(d > 0)):
        raise ValueError("separation must be strictly positive")
    if np.any(np.abs(offset) > d * (1 + 1e-12)):
        raise ValueError("|offset| must not exceed the separation")
    A, B = _radial_parts(k.k0 * d)
    out = k.k0 * (A + (offset / d) ** 2 * B)
    return out[()] if out.ndim == 0 else out


def corr_exact(separation, k: Wavenumber):
    """Axis-averaged exact correlation, ``sum of three components / (12 pi)``.

    ``separation`` is an array of difference vectors, shape ``(..., 3)``.
    """
    sep = np.asarray(separation, dtype=float)
    d = np.linalg.norm(sep, axis=-1)
    total = sum(corr_exact_component(d, sep[..., i], k) for i in range(3))
    return total / (12.0 * np.pi)


def corr_closed_form(d, k: Wavenumber):
    """Trace-reduced form of :func:`corr_exact`: ``k0/(6 pi) sinc(k0 d)``."""
    return reference_correlation(k) * sinc(k.k0 * np.asarray(d, dtype=float))


def reference_correlation(k: Wavenumber) -> float:
    """Zero-separation field correlation ``k0 / (6 pi)``."""
    return k.k0 / (6.0 * np.pi)


def corr_taylor_paper(d, k: Wavenumber):
    """Printed small-separation expansion ``k0/(6 pi) + k0**3 d**2/(288 pi)``."""
    d = np.asarray(d, dtype=float)
    if np.any(d < 0):
        raise ValueError("separation must be nonnegative")
    out = k.k0 / (6.0 * np.pi) + k.k0**3 * d**2 / (288.0 * np.pi)
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class CorrelationSample:
    d: float
    im_x: float
    im_y: float
    im_z: float
    averaged: float
    taylor_paper: float
    reference: float


def correlation_sample(separation, k: Wavenumber) -> CorrelationSample:
    sep = np.asarray(separation, dtype=float)
    d = float(np.linalg.norm(sep))
    comps = [float(corr_exact_component(d, sep[i], k)) for i in range(3)]
    return CorrelationSample(d, *comps, averaged=sum(comps) / (12.0 * np.pi),
                             taylor_paper=float(corr_taylor_paper(d, k)),
                             reference=reference_correlation(k))


class SweepRow(NamedTuple):
    spacing_over_lambda: float
    n_antennas: int
    distance_m: float
    corr_exact_norm: float
    corr_taylor_paper_norm: float


SWEEP_COLUMNS = SweepRow._fields


def corr_sweep(spacings, n_max: int, k: Wavenumber) -> list:
    """Normalized correlation between the two end patches of a linear array.

    For each pitch in ``spacings`` (meters) and each array length ``N`` in
    ``2..n_max``, the patches ``1`` and ``N`` of an x-aligned array are
    ``(N - 1) * pitch`` apart. Both the exact and the printed-expansion
    correlations are divided by the reference ``k0/(6 pi)``.
    """
    spacings = [float(s) for s in spacings]
    if any(not s > 0 for s in spacings):
        raise ValueError("spacings must be positive")
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    ref = reference_correlation(k)
    n = np.arange(2, n_max + 1)
    rows = []
    for s in spacings:
        d = (n - 1) * s
        sep = np.column_stack([d, np.zeros_like(d), np.zeros_like(d)])
        exact = corr_exact(sep, k) / ref
        taylor = corr_taylor_paper(d, k) / ref
        rows.extend(SweepRow(s / k.wavelength, int(ni), float(di), float(e), float(t))
                    for ni, di, e, t in zip(n, d, exact, taylor))
    return rows
