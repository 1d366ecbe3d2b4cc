"""Electromagnetic mode spectrum of the three-mirror resonator.

Two routes to the same physics: the exact transcendental mode condition

    cot k(L+q) + cot k(L-q) = 2 sqrt((1-T)/T)

solved by bracketed root finding, and the closed-form even/odd branch
frequencies valid for high-order modes (L >> lambda_n, |q| << lambda_n)

    omega_e(q) = omega_n + [asin(sqrt(1-T) cos 2 k_n q) - asin(sqrt(1-T))]/tau
    omega_o(q) = omega_n + pi/tau
                 - [asin(sqrt(1-T) cos 2 k_n q) + asin(sqrt(1-T))]/tau

with tau = 2L/c the sub-cavity round-trip time.  The doublet is periodic
in q with period lambda_n/2 and even in q; the gap closes toward the
avoided crossings at q = j*lambda_n/4.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .constants import C_LIGHT
from .exceptions import (
    DegenerateEquationError,
    InvalidModeNumberError,
    OutOfValidityRangeError,
    WindowTooNarrowError,
)
from .numutil import cospi, quarter_wave_phase
from .system import CavityGeometry


@dataclass(frozen=True)
class ModeBranchPoint:
    """One tabulated mode frequency: mode number, branch, position, omega."""

    n: int
    branch: str
    q: float
    omega: float


def reference_frequency(geom: CavityGeometry, n: int) -> float:
    """Degenerate sub-cavity resonance omega_n = n*pi*c/L [rad/s].

    Raises
    ------
    InvalidModeNumberError
        If n < 1.
    """
    if n < 1:
        raise InvalidModeNumberError(f"mode number must be >= 1, got {n}")
    return n * np.pi * C_LIGHT / geom.L


def mode_wavelength(geom: CavityGeometry, n: int) -> float:
    """Wavelength of mode n: lambda_n = 2L/n [m]."""
    if n < 1:
        raise InvalidModeNumberError(f"mode number must be >= 1, got {n}")
    return 2.0 * geom.L / n


def _mode_equation(k: float, L: float, q: float, s: float, phi: float) -> float:
    # cot k(L+q) + cot k(L-q) = 2 sqrt((1-T)/T) multiplied through by
    # sin k(L+q) sin k(L-q): sin(2kL + phi) = sqrt(1-T) cos(2kq) with
    # phi = asin(sqrt(1-T)).  Bounded and singularity free; the extra
    # roots gained are the node-at-mirror modes, which are genuine
    # resonances the cotangent form misses.
    return np.sin(2.0 * k * L + phi) - s * np.cos(2.0 * k * q)


def exact_wavenumbers(geom: CavityGeometry, q: float, k_window: tuple[float, float]) -> np.ndarray:
    """All wavenumbers of the full resonator inside ``k_window`` [rad/m].

    Roots of the transcendental mode condition are bracketed between
    consecutive extrema of sin(2kL + phi), where the equation residual has
    a guaranteed sign for T > 0, then polished with Newton steps to
    relative tolerance 1e-12.

    Raises
    ------
    DegenerateEquationError
        For T = 0 the two sub-cavities decouple; use omega = n*pi*c/(L+-q).
    WindowTooNarrowError
        If no root lies inside the window.
    """
    T = geom.T
    if T == 0.0:
        raise DegenerateEquationError(
            "T = 0 decouples the sub-cavities; the mode condition degenerates"
        )
    if not abs(q) < geom.L:
        raise OutOfValidityRangeError(f"|q| = {abs(q)} must be < L = {geom.L}")
    k_lo, k_hi = k_window
    if not (0.0 < k_lo < k_hi < np.inf):
        raise WindowTooNarrowError(f"bad window {k_window}")

    L = geom.L
    s = np.sqrt(1.0 - T)
    phi = np.arcsin(s)
    # extrema of sin(2kL + phi) at 2kL + phi = (m + 1/2) pi; |residual|
    # >= 1 - sqrt(1-T) > 0 there with alternating sign
    m_lo = int(np.floor((2.0 * k_lo * L + phi) / np.pi - 0.5)) - 1
    m_hi = int(np.ceil((2.0 * k_hi * L + phi) / np.pi - 0.5)) + 1
    crests = (((np.arange(m_lo, m_hi + 1) + 0.5) * np.pi) - phi) / (2.0 * L)

    roots = []
    for lo, hi in zip(crests[:-1], crests[1:]):
        if lo <= 0.0:
            continue
        flo = _mode_equation(lo, L, q, s, phi)
        fhi = _mode_equation(hi, L, q, s, phi)
        if flo == 0.0:
            k = lo
        elif flo * fhi > 0.0:
            continue
        else:
            k = brentq(_mode_equation, lo, hi, args=(L, q, s, phi),
                       xtol=1e-300, rtol=4 * np.finfo(float).eps)
        for _ in range(3):
            f = _mode_equation(k, L, q, s, phi)
            df = 2.0 * L * np.cos(2.0 * k * L + phi) + 2.0 * q * s * np.sin(2.0 * k * q)
            if df == 0.0:
                break
            step = f / df
            k -= step
            if abs(step) <= 1e-13 * k:
                break
        if k_lo <= k <= k_hi:
            roots.append(k)
    if not roots:
        raise WindowTooNarrowError(
            f"no mode bracketed in k window {k_window}; widen the window"
        )
    roots = np.array(sorted(roots))
    keep = np.concatenate(([True], np.diff(roots) > 1e-12 * roots[:-1]))
    return roots[keep]


def mode_pair_exact(geom: CavityGeometry, n: int, q: float) -> tuple[float, float]:
    """Exact (omega_even, omega_odd) of doublet n at mirror position q [rad/s].

    Solves the transcendental condition in a window of one free spectral
    range centered on omega_n and assigns the root at or below omega_n to
    the even branch, the one above to the odd branch.
    """
    k_n = n * np.pi / geom.L
    half = np.pi / (2.0 * geom.L)
    pad = 1e-6 * half
    roots = exact_wavenumbers(geom, q, (k_n - half - pad, k_n + half + pad))
    k_mid = k_n * (1.0 + 1e-12)
    below = roots[roots <= k_mid]
    above = roots[roots > k_mid]
    if below.size == 0 or above.size == 0:
        raise WindowTooNarrowError(
            f"could not isolate the n = {n} doublet at q = {q}"
        )
    return C_LIGHT * below[-1], C_LIGHT * above[0]


def branch_frequencies(geom: CavityGeometry, n: int, q) -> tuple:
    """Closed-form (omega_even, omega_odd) of doublet n at position q [rad/s].

    Valid for |q| << lambda_n; enforced as a hard bound at |q| = lambda_n
    with a warning above lambda_n/2.  Accepts scalar or array q.

    Raises
    ------
    OutOfValidityRangeError
        If |q| > lambda_n.
    """
    lam = mode_wavelength(geom, n)
    qa = np.asarray(q, dtype=float)
    if np.any(np.abs(qa) > lam):
        raise OutOfValidityRangeError(
            f"|q| exceeds lambda_n = {lam}; closed form is out of range"
        )
    if np.any(np.abs(qa) > 0.5 * lam):
        warnings.warn(
            "branch_frequencies used beyond lambda_n/2; closed form degrades",
            stacklevel=2,
        )
    omega_n = reference_frequency(geom, n)
    tau = geom.tau
    s = np.sqrt(1.0 - geom.T)
    a = np.arcsin(s * cospi(quarter_wave_phase(qa, lam)))
    b = np.arcsin(s)
    omega_e = omega_n + (a - b) / tau
    omega_o = omega_n + np.pi / tau - (a + b) / tau
    if np.ndim(omega_e) == 0:
        return float(omega_e), float(omega_o)
    return omega_e, omega_o


def doublet_gap_at_node(geom: CavityGeometry) -> float:
    """Closed-form gap omega_o - omega_e at q = 0 [rad/s].

    Algebraically identical to the quadratic-regime detuning
    (2/tau)*acos(sqrt(1-T)) via acos(x) = pi/2 - asin(x).
    """
    return np.pi / geom.tau - 2.0 * np.arcsin(np.sqrt(1.0 - geom.T)) / geom.tau


def spectrum_sweep(geom: CavityGeometry, n_list, q_grid, method: str = "closed") -> list[ModeBranchPoint]:
    """Tabulate both branches for every (n, q); rows ordered (n, q, branch).

    ``method`` is "closed" (default) or "exact" (transcendental roots;
    slower).  Safe to parallelize externally: pure function of its inputs.
    """
    if method not in ("closed", "exact"):
        raise ValueError(f"unknown method {method!r}")
    rows: list[ModeBranchPoint] = []
    for n in n_list:
        if method == "closed":
            we, wo = branch_frequencies(geom, n, np.asarray(q_grid, dtype=float))
            we = np.atleast_1d(we)
            wo = np.atleast_1d(wo)
            for q, e, o in zip(q_grid, we, wo):
                rows.append(ModeBranchPoint(n, "even", float(q), float(e)))
                rows.append(ModeBranchPoint(n, "odd", float(q), float(o)))
        else:
            for q in q_grid:
                e, o = mode_pair_exact(geom, n, float(q))
                rows.append(ModeBranchPoint(n, "even", float(q), e))
                rows.append(ModeBranchPoint(n, "odd", float(q), o))
    return rows
