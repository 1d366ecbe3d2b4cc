"""Small numerical helpers shared across modules.

The mode functions depend on the mirror position only through cos/sin of
2*k_n*q = pi * (4 q / lambda_n).  Evaluating that phase in units of a
quarter wavelength and reducing it modulo full turns keeps the symmetry
properties exact in floating point: branch frequencies come out exactly
even and periodic in q, and the coupling vanishes identically at the
quarter-wave nodes instead of leaving ~1e-16 residues.
"""

from __future__ import annotations

import numpy as np

_EPS = np.finfo(float).eps


def quarter_wave_phase(q, lam: float):
    """Mirror position in units of a quarter wavelength: y = 4 q / lambda."""
    return 4.0 * np.asarray(q, dtype=float) / lam


def _snap_half_units(y):
    """Round y to the nearest multiple of 1/2 when within a few ulp.

    Inputs like j*(lam/4) accumulate 1-2 ulp of rounding before the phase
    is formed; physically they are the nodes, so treat them as such.
    """
    y2 = 2.0 * y
    nearest = np.round(y2)
    tol = 8.0 * _EPS * np.maximum(1.0, np.abs(y2))
    return np.where(np.abs(y2 - nearest) <= tol, 0.5 * nearest, y)


def sinpi(y):
    """sin(pi*y), exact at integer and half-integer y."""
    y = _snap_half_units(np.asarray(y, dtype=float))
    r = y - 2.0 * np.round(0.5 * y)  # reduce to [-1, 1]
    # fold onto [-1/2, 1/2]: sin(pi(1-x)) = sin(pi x)
    r = np.where(np.abs(r) > 0.5, np.sign(r) * (1.0 - np.abs(r)), r)
    out = np.sin(np.pi * r)
    return out if out.ndim else float(out)


def cospi(y):
    """cos(pi*y), exact at integer and half-integer y."""
    y = _snap_half_units(np.asarray(y, dtype=float))
    r = np.abs(y - 2.0 * np.round(0.5 * y))  # cos even, reduce to [0, 1]
    folded = np.where(r > 0.5, 1.0 - r, r)   # cos(pi(1-x)) = -cos(pi x)
    out = np.where(r > 0.5, -np.cos(np.pi * folded), np.cos(np.pi * folded))
    out = np.where(folded == 0.5, 0.0, out)
    return out if out.ndim else float(out)


def distance_to_quarter_node(q, lam: float):
    """Distance from q to the nearest integer multiple of lambda/4 [m]."""
    y = _snap_half_units(quarter_wave_phase(q, lam))
    d = np.abs(y - np.round(y)) * (lam / 4.0)
    return d if d.ndim else float(d)


def hurwitz_stable(coeffs) -> bool:
    """Routh-Hurwitz test on descending polynomial coefficients.

    Returns True when every root of the polynomial has a negative real
    part, by positivity of the leading principal minors of the Hurwitz
    matrix (after normalizing the leading coefficient to be positive).
    """
    a = np.asarray(coeffs, dtype=float)
    if a.ndim != 1 or a.size < 2:
        raise ValueError("need a polynomial of degree >= 1")
    if a[0] == 0.0:
        raise ValueError("leading coefficient vanishes")
    if a[0] < 0.0:
        a = -a
    n = a.size - 1
    # all coefficients positive is necessary
    if np.any(a <= 0.0):
        return False
    H = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            k = 2 * (j + 1) - (i + 1)  # subscript into a_0..a_n
            if 0 <= k <= n:
                H[i, j] = a[k]
    for k in range(1, n + 1):
        if np.linalg.det(H[:k, :k]) <= 0.0:
            return False
    return True
