"""Optomechanical coupling constants of the doublet modes.

Away from the quarter-wave nodes the branch frequencies are linear in the
mirror displacement, with slope -+xi_L for the even/odd branch:

    xi_L = xi * sin(2 k_n q0) / sqrt((1-T)^-1 - cos^2(2 k_n q0)),
    xi   = omega_n / L.

At the nodes q0 = j*lambda_n/4 the linear coupling vanishes and the
dependence is quadratic with curvature -+xi_Q:

    xi_Q    = (tau * xi^2 / 2) * sqrt((1-T)/T),
    Delta_o = (2/tau) * acos(sqrt(1-T))   (gap between the branches there).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DivergentCouplingError, WrongRegimeError
from .modespectrum import mode_wavelength, reference_frequency
from .numutil import cospi, distance_to_quarter_node, quarter_wave_phase, sinpi
from .system import CavityGeometry

# fraction of lambda_n around each quarter-wave node classified as quadratic
DEFAULT_REGIME_WINDOW_FRACTION = 0.01


@dataclass(frozen=True)
class CouplingConstants:
    """All coupling constants at one rest position.

    xi, xi_L carry [rad s^-1 m^-1]; xi_Q [rad s^-1 m^-2]; the shifts and
    the node detuning Delta_o are [rad/s].
    """

    xi: float
    xi_L: float
    xi_Q: float
    delta_e: float
    delta_o: float
    Delta_o: float
    regime: str


def bare_coupling(geom: CavityGeometry, n: int) -> float:
    """Perfect-reflector coupling xi = omega_n/L [rad s^-1 m^-1]."""
    return reference_frequency(geom, n) / geom.L


def regime_window(geom: CavityGeometry, n: int, window: float | None = None) -> float:
    """Half-width [m] of the quadratic window around each quarter-wave node."""
    if window is None:
        return DEFAULT_REGIME_WINDOW_FRACTION * mode_wavelength(geom, n)
    if window <= 0.0:
        raise ValueError("regime window must be positive")
    return window


def coupling_regime(geom: CavityGeometry, n: int, q0: float, window: float | None = None) -> str:
    """Classify q0 as "linear" or "quadratic" (within ``window`` of a node).

    The boundary is exclusive: a distance exactly equal to the window is
    linear.
    """
    w = regime_window(geom, n, window)
    lam = mode_wavelength(geom, n)
    return "quadratic" if distance_to_quarter_node(q0, lam) < w else "linear"


def wavelength_regime(lam: float, q0: float, window: float | None = None) -> str:
    """Regime classification from a wavelength instead of a mode number."""
    w = DEFAULT_REGIME_WINDOW_FRACTION * lam if window is None else window
    return "quadratic" if distance_to_quarter_node(q0, lam) < w else "linear"


def linear_shifts(geom: CavityGeometry, n: int, q0: float, window: float | None = None) -> tuple[float, float]:
    """Frequency shifts (delta_e, delta_o) of the branches at rest position q0.

    delta_e = [asin(sqrt(1-T)) - asin(sqrt(1-T) cos 2 k_n q0)]/tau and
    delta_o = pi/tau - [asin(sqrt(1-T)) + asin(sqrt(1-T) cos 2 k_n q0)]/tau,
    both >= 0.

    Raises
    ------
    WrongRegimeError
        If q0 falls in the quadratic window.
    """
    if coupling_regime(geom, n, q0, window) != "linear":
        raise WrongRegimeError(
            f"q0 = {q0} is within the quadratic window of a quarter-wave node"
        )
    return _shifts(geom, n, q0)


def _shifts(geom: CavityGeometry, n: int, q0: float) -> tuple[float, float]:
    lam = mode_wavelength(geom, n)
    tau = geom.tau
    s = np.sqrt(1.0 - geom.T)
    a = np.arcsin(s * cospi(quarter_wave_phase(q0, lam)))
    b = np.arcsin(s)
    return float((b - a) / tau), float(np.pi / tau - (b + a) / tau)


def linear_coupling_raw(geom: CavityGeometry, n: int, q0) -> float:
    """xi_L without the regime guard; exactly 0 at q0 = j*lambda_n/4.

    Signed: positive where the odd branch rises with q.  Used by sweeps,
    which must cross the nodes.
    """
    lam = mode_wavelength(geom, n)
    xi = bare_coupling(geom, n)
    y = quarter_wave_phase(q0, lam)
    s2 = np.asarray(sinpi(y))
    c2 = np.asarray(cospi(y))
    if geom.T == 1.0:
        out = np.zeros_like(s2)
        return out if out.ndim else 0.0
    denom_sq = 1.0 / (1.0 - geom.T) - c2 * c2
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(s2 == 0.0, 0.0, xi * s2 / np.sqrt(denom_sq))
    return out if out.ndim else float(out)


def linear_coupling(geom: CavityGeometry, n: int, q0: float, window: float | None = None) -> float:
    """Linear coupling xi_L at q0 [rad s^-1 m^-1]; |xi_L| <= xi always.

    Raises
    ------
    WrongRegimeError
        If q0 falls in the quadratic window.
    """
    if coupling_regime(geom, n, q0, window) != "linear":
        raise WrongRegimeError(
            f"q0 = {q0} is within the quadratic window of a quarter-wave node"
        )
    return linear_coupling_raw(geom, n, q0)


def quadratic_detuning(geom: CavityGeometry) -> float:
    """Doublet gap Delta_o = (2/tau)*acos(sqrt(1-T)) at a node [rad/s]."""
    return 2.0 * np.arccos(np.sqrt(1.0 - geom.T)) / geom.tau


def quadratic_coupling(geom: CavityGeometry, n: int) -> float:
    """Quadratic coupling xi_Q = (tau xi^2/2) sqrt((1-T)/T) [rad s^-1 m^-2].

    Raises
    ------
    DivergentCouplingError
        For T = 0 the crossing is sharp and the quadratic expansion breaks
        down.
    """
    if geom.T == 0.0:
        raise DivergentCouplingError("xi_Q diverges as T -> 0; no quadratic window at T = 0")
    xi = bare_coupling(geom, n)
    return 0.5 * geom.tau * xi * xi * np.sqrt((1.0 - geom.T) / geom.T)


def coupling_constants(geom: CavityGeometry, n: int, q0: float, window: float | None = None) -> CouplingConstants:
    """Assemble every coupling constant at rest position q0."""
    regime = coupling_regime(geom, n, q0, window)
    de, do = _shifts(geom, n, q0)
    return CouplingConstants(
        xi=bare_coupling(geom, n),
        xi_L=float(linear_coupling_raw(geom, n, q0)),
        xi_Q=quadratic_coupling(geom, n),
        delta_e=de,
        delta_o=do,
        Delta_o=quadratic_detuning(geom),
        regime=regime,
    )


def coupling_sweep(geom: CavityGeometry, n: int, T_list, q0_grid):
    """Tabulate xi_L(q0; T) and (Delta_o, xi_Q)(T).

    Returns (linear_rows, quadratic_rows) where linear_rows are tuples
    (T, q0, xi_L) and quadratic_rows are (T, Delta_o, xi_Q).
    """
    linear_rows = []
    quadratic_rows = []
    for T in T_list:
        g = CavityGeometry(geom.L, float(T), geom.T_end, geom.gamma_override)
        xi_l = np.atleast_1d(linear_coupling_raw(g, n, np.asarray(q0_grid, dtype=float)))
        for q0, v in zip(q0_grid, xi_l):
            linear_rows.append((float(T), float(q0), float(v)))
        if T > 0.0:
            quadratic_rows.append((float(T), quadratic_detuning(g), quadratic_coupling(g, n)))
    return linear_rows, quadratic_rows
