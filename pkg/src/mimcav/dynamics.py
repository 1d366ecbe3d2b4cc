"""Steady states, linear stability, and radiation-modified mechanics.

The quadratic single-mode configuration (odd mode driven at a node) has
the unique steady state q_s = 0 and the block-diagonal drift matrix

        ( -g/2   delta   0                          0      )
    M = ( -delta -g/2    0                          0      )
        (  0      0      0                          1/m    )
        (  0      0     -(2 hbar xi_Q b_s^2 + m wM^2)  -D_M/m ),

so the optical vacuum never feeds the mechanics: the trap stiffens the
spring while leaving the damping at its intrinsic value.  The linear
regime instead yields frequency-dependent effective parameters

    w_eff^2(w) = wM^2 - V * d/(d^2+g^2/4)
                 * ((g/2)^2 - (w^2-d^2)) / (((g/2)^2+(w-d)^2)((g/2)^2+(w+d)^2))
    D_eff(w)   = D_M + m V * d/(d^2+g^2/4)
                 * g / (((g/2)^2+(w-d)^2)((g/2)^2+(w+d)^2))

with V = 4 xi_L g P_in / (m L); red detuning d > 0 adds damping, blue
detuning stiffens the spring at the price of anti-damping.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .constants import HBAR
from .coupling import CouplingConstants, quadratic_coupling
from .exceptions import (
    AntitrappingConfigurationError,
    ConfigError,
    UnstableSystemError,
)
from .modespectrum import reference_frequency
from .numutil import hurwitz_stable
from .system import CavityGeometry, DriveField, MechanicalOscillator

STABILITY_SLACK = 1e-12  # relative to the spectral radius


@dataclass(frozen=True)
class SteadyState:
    """Classical operating point: position, momentum, intracavity amplitude.

    b_s is real and >= 0 by the phase convention for the input field.
    """

    q_s: float
    p_s: float
    b_s: float


@dataclass(frozen=True)
class StabilityReport:
    eigenvalues: np.ndarray
    stable: bool
    routh_hurwitz: bool


@dataclass(frozen=True)
class EffectiveResponse:
    """Effective mechanical frequency and damping, possibly frequency dependent.

    ``omega_eff_sq(omega)`` returns the effective squared frequency
    [rad^2/s^2] and ``d_eff(omega)`` the effective damping [kg/s] at probe
    frequency omega; both accept scalars or arrays.  ``regime`` is
    "quadratic-constant" or "linear-frequency-dependent".
    """

    regime: str
    _w2: Callable = field(repr=False)
    _d: Callable = field(repr=False)

    def omega_eff_sq(self, omega):
        return self._w2(np.asarray(omega, dtype=float))

    def d_eff(self, omega):
        return self._d(np.asarray(omega, dtype=float))

    def omega_eff(self, omega):
        return np.sqrt(self.omega_eff_sq(omega))

    @property
    def is_constant(self) -> bool:
        return self.regime == "quadratic-constant"

    @classmethod
    def constant(cls, omega_eff: float, d_eff: float) -> "EffectiveResponse":
        w2 = float(omega_eff) ** 2
        d = float(d_eff)
        return cls(
            regime="quadratic-constant",
            _w2=lambda w: np.broadcast_to(w2, np.shape(w)).copy() if np.ndim(w) else w2,
            _d=lambda w: np.broadcast_to(d, np.shape(w)).copy() if np.ndim(w) else d,
        )

    def peak_parameters(self, omega_M: float, max_iter: int = 60) -> tuple[float, float]:
        """(omega_*, D_*) at the self-consistent response peak.

        Fixed point of omega = omega_eff(omega) started from omega_M; for
        a constant response this is just (omega_eff, D_eff).

        Raises
        ------
        UnstableSystemError
            If the squared effective frequency turns negative along the
            iteration (no adiabatic spring at this operating point).
        """
        w2 = float(self.omega_eff_sq(omega_M))
        if w2 <= 0.0:
            raise UnstableSystemError("effective spring is negative at omega_M; no stable peak")
        w = float(np.sqrt(w2))
        for _ in range(max_iter):
            w2 = float(self.omega_eff_sq(w))
            if w2 <= 0.0:
                raise UnstableSystemError(
                    "effective spring turns negative at its own oscillation "
                    "frequency; the adiabatic-response picture fails here"
                )
            w_next = float(np.sqrt(w2))
            if abs(w_next - w) <= 1e-12 * w:
                w = w_next
                break
            w = w_next
        return w, float(self.d_eff(w))


def steady_state_quadratic(geom: CavityGeometry, mech: MechanicalOscillator, drive: DriveField) -> SteadyState:
    """Steady state of the quadratic (node) configuration.

    q_s = 0 is the only real solution regardless of xi_Q or power: the
    restoring coefficient 2 hbar xi_Q |b_s|^2 + m wM^2 is a sum of two
    positive terms, so there is no bistability.

    Raises
    ------
    AntitrappingConfigurationError
        If the drive addresses the even branch, whose curvature at the
        node anti-traps.
    """
    if drive.branch != "odd":
        raise AntitrappingConfigurationError(
            "even-branch drive at a node anti-traps; refuse to build a steady state"
        )
    gamma = geom.gamma
    f_in = drive.input_amplitude(reference_frequency(geom, drive.n))
    b_s = np.sqrt(gamma / (drive.delta**2 + (gamma / 2.0) ** 2)) * f_in if f_in > 0 else 0.0
    return SteadyState(q_s=0.0, p_s=0.0, b_s=float(b_s))


def fluctuation_matrix(
    geom: CavityGeometry,
    mech: MechanicalOscillator,
    drive: DriveField,
    ss: SteadyState,
    xi_Q: float | None = None,
) -> np.ndarray:
    """Drift matrix of the linearized quadratic configuration.

    State ordering (dX_b, dY_b, dq, dp).  The optical and mechanical
    blocks are exactly decoupled because q_s = 0.
    """
    if xi_Q is None:
        xi_Q = quadratic_coupling(geom, drive.n)
    gamma = geom.gamma
    spring = 2.0 * HBAR * xi_Q * ss.b_s**2 + mech.m * mech.omega_M**2
    return np.array(
        [
            [-gamma / 2.0, drive.delta, 0.0, 0.0],
            [-drive.delta, -gamma / 2.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0 / mech.m],
            [0.0, 0.0, -spring, -mech.D_M / mech.m],
        ]
    )


def stability(M: np.ndarray) -> StabilityReport:
    """Eigenvalue and Routh-Hurwitz stability of a real drift matrix.

    ``stable`` allows a numerical slack of 1e-12 times the spectral
    radius on the real parts; ``routh_hurwitz`` applies the strict
    algebraic criterion to the characteristic polynomial.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ConfigError("drift matrix must be square")
    eig = np.linalg.eigvals(M)
    radius = float(np.max(np.abs(eig))) if eig.size else 0.0
    stable = bool(np.max(eig.real) <= STABILITY_SLACK * radius)
    # char poly of M has roots = eigenvalues; Hurwitz wants them in the
    # left half plane
    coeffs = np.poly(M)
    return StabilityReport(eigenvalues=eig, stable=stable, routh_hurwitz=hurwitz_stable(coeffs))


def effective_params_quadratic(
    geom: CavityGeometry,
    mech: MechanicalOscillator,
    drive: DriveField,
    coupling: CouplingConstants | None = None,
    xi_Q: float | None = None,
) -> EffectiveResponse:
    """Constant effective parameters of the quadratic configuration.

    w_eff^2 = wM^2 + (2 xi_Q g P_in/(m w_n)) / (d^2 + (g/2)^2) and
    D_eff = D_M: a pure dispersive trap with no back-action damping.
    """
    if drive.branch != "odd":
        raise AntitrappingConfigurationError("only the odd branch traps at a node")
    if xi_Q is None:
        xi_Q = coupling.xi_Q if coupling is not None else quadratic_coupling(geom, drive.n)
    gamma = geom.gamma
    omega_n = reference_frequency(geom, drive.n)
    w2 = mech.omega_M**2 + (2.0 * xi_Q * gamma * drive.P_in / (mech.m * omega_n)) / (
        drive.delta**2 + (gamma / 2.0) ** 2
    )
    return EffectiveResponse.constant(np.sqrt(w2), mech.D_M)


@dataclass(frozen=True)
class TrapFrequencies:
    """Resonant trap frequency under the two published conventions.

    ``omega_resonant_limit`` is the delta -> 0 limit of the general
    detuned expression (spring gain 8 xi_Q P/(m w_n g)); ``omega_dedicated``
    uses the dedicated on-resonance formula (gain 4 xi_Q P/(m w_n g)).
    The squared spring terms differ by exactly a factor 2; the general
    limit is taken as canonical and the mismatch is surfaced here rather
    than reconciled.
    """

    omega_resonant_limit: float
    omega_dedicated: float
    spring_gain_ratio: float


def max_trap_frequency(
    geom: CavityGeometry,
    mech: MechanicalOscillator,
    drive: DriveField,
    coupling: CouplingConstants | None = None,
    xi_Q: float | None = None,
) -> TrapFrequencies:
    """Maximum trapping frequency on resonance (delta = 0).

    Raises
    ------
    ConfigError
        If the drive is not on resonance.
    """
    if drive.delta != 0.0:
        raise ConfigError("max trap frequency is defined on resonance (delta = 0)")
    if xi_Q is None:
        xi_Q = coupling.xi_Q if coupling is not None else quadratic_coupling(geom, drive.n)
    omega_n = reference_frequency(geom, drive.n)
    gain_dedicated = 4.0 * xi_Q * drive.P_in / (mech.m * omega_n * geom.gamma)
    resp = effective_params_quadratic(geom, mech, drive, xi_Q=xi_Q)
    w_limit = float(resp.omega_eff(mech.omega_M))
    w2_limit = w_limit**2
    ratio = (w2_limit - mech.omega_M**2) / gain_dedicated if gain_dedicated > 0 else float("nan")
    return TrapFrequencies(
        omega_resonant_limit=w_limit,
        omega_dedicated=float(np.sqrt(mech.omega_M**2 + gain_dedicated)),
        spring_gain_ratio=float(ratio),
    )


def _linear_addends(geom: CavityGeometry, mech: MechanicalOscillator, drive: DriveField, xi_eff: float):
    """(spring(omega), damping(omega)) contributions of one linear drive."""
    gamma = geom.gamma
    delta = drive.delta
    V = 4.0 * abs(xi_eff) * gamma * drive.P_in / (mech.m * geom.L)
    pref = V * delta / (delta**2 + gamma**2 / 4.0)
    half_sq = (gamma / 2.0) ** 2

    def spring(w):
        lor = (half_sq + (w - delta) ** 2) * (half_sq + (w + delta) ** 2)
        return -pref * (half_sq - (w**2 - delta**2)) / lor

    def damping(w):
        lor = (half_sq + (w - delta) ** 2) * (half_sq + (w + delta) ** 2)
        return mech.m * pref * gamma / lor

    return spring, damping


def linear_response(
    geom: CavityGeometry,
    mech: MechanicalOscillator,
    drives: Sequence[DriveField],
    xi_effs: Sequence[float],
) -> EffectiveResponse:
    """Frequency-dependent effective response from several linear drives.

    Spring and damping contributions add; each drive uses its own linear
    coupling constant in place of the bare xi.
    """
    addends = [_linear_addends(geom, mech, d, x) for d, x in zip(drives, xi_effs)]
    wM2 = mech.omega_M**2
    D_M = mech.D_M

    def w2(w):
        out = wM2 + sum(s(w) for s, _ in addends)
        return out

    def d(w):
        return D_M + sum(g(w) for _, g in addends)

    return EffectiveResponse(regime="linear-frequency-dependent", _w2=w2, _d=d)


def effective_params_linear(
    geom: CavityGeometry,
    mech: MechanicalOscillator,
    drive: DriveField,
    coupling: CouplingConstants,
) -> EffectiveResponse:
    """Effective response of a single drive in the linear regime.

    Uses coupling.xi_L for the drive strength; P_in enters the prefactor
    V = 4 xi_L gamma P_in / (m L) as printed, i.e. per pumped mode.
    """
    return linear_response(geom, mech, [drive], [coupling.xi_L])


def operating_response(
    geom: CavityGeometry,
    mech: MechanicalOscillator,
    drives: Sequence[DriveField],
    xi_effs: Sequence[float],
) -> EffectiveResponse:
    """Operating-point response: the convention behind the headline numbers.

    Red-detuned drives (delta > 0) enter with their full frequency
    dependence.  Blue-detuned drives (delta < 0) contribute their spring
    evaluated at omega_M as a constant and no damping term: at the
    reference powers a blue trap's anti-damping exceeds the cooling and
    its spring develops a sideband resonance at omega ~ |delta|, so the
    all-in response has no stable self-consistent peak there.  The
    excluded anti-damping is exactly what the two-color scheme removes;
    ``linear_scheme_performance`` reports it separately.
    """
    red, red_xi, blue_spring = [], [], 0.0
    for d, x in zip(drives, xi_effs):
        if d.delta < 0.0:
            spring, _ = _linear_addends(geom, mech, d, x)
            blue_spring += float(spring(mech.omega_M))
        else:
            red.append(d)
            red_xi.append(x)
    base = linear_response(geom, mech, red, red_xi)
    if blue_spring == 0.0:
        return base
    return EffectiveResponse(
        regime="linear-frequency-dependent",
        _w2=lambda w, _b=base._w2, _e=blue_spring: _b(w) + _e,
        _d=base._d,
    )


def system_response(
    geom: CavityGeometry,
    mech: MechanicalOscillator,
    drives: Sequence[DriveField],
    window: float | None = None,
    include_antidamping: bool = False,
) -> tuple[EffectiveResponse, list[dict]]:
    """Total effective response of several drives at the rest position.

    Each drive is classified by the regime of mech.q0 for its own mode
    wavelength: quadratic drives contribute a constant spring (and must
    address the odd branch), linear drives contribute the
    frequency-dependent spring and damping with their local xi_L.  By
    default blue-detuned linear drives follow the operating-point
    convention of ``operating_response``; set ``include_antidamping`` for
    the all-in sum (diagnostics only; it may have no stable peak).
    Returns the summed response and one diagnostic dict per drive.
    """
    from .coupling import linear_coupling_raw, wavelength_regime
    from .modespectrum import mode_wavelength

    linear_drives: list[DriveField] = []
    xi_list: list[float] = []
    extra_spring = 0.0
    info: list[dict] = []
    for d in drives:
        lam = mode_wavelength(geom, d.n)
        regime = wavelength_regime(lam, mech.q0, window)
        if regime == "quadratic":
            if d.branch != "odd":
                raise AntitrappingConfigurationError(
                    "quadratic-regime drive must address the odd branch"
                )
            xi_Q = quadratic_coupling(geom, d.n)
            omega_n = reference_frequency(geom, d.n)
            gain = (2.0 * xi_Q * geom.gamma * d.P_in / (mech.m * omega_n)) / (
                d.delta**2 + (geom.gamma / 2.0) ** 2
            )
            extra_spring += gain
            info.append({"regime": "quadratic", "n": d.n, "xi_Q": xi_Q,
                         "spring_at_omega_M": gain, "delta": d.delta})
        else:
            xi_L = float(linear_coupling_raw(geom, d.n, mech.q0))
            linear_drives.append(d)
            xi_list.append(xi_L)
            info.append({"regime": "linear", "n": d.n, "xi_L": xi_L, "delta": d.delta})

    if not linear_drives:
        w2_const = mech.omega_M**2 + extra_spring
        return EffectiveResponse.constant(np.sqrt(w2_const), mech.D_M), info

    if include_antidamping:
        base = linear_response(geom, mech, linear_drives, xi_list)
    else:
        base = operating_response(geom, mech, linear_drives, xi_list)
    lin_idx = [i for i, rec in enumerate(info) if rec["regime"] == "linear"]
    for rec_i, d, x in zip(lin_idx, linear_drives, xi_list):
        one = linear_response(geom, mech, [d], [x])
        info[rec_i]["spring_at_omega_M"] = float(one.omega_eff_sq(mech.omega_M)) - mech.omega_M**2
        info[rec_i]["damping_at_omega_M"] = float(one.d_eff(mech.omega_M)) - mech.D_M
    if extra_spring == 0.0:
        return base, info
    resp = EffectiveResponse(
        regime="linear-frequency-dependent",
        _w2=lambda w, _b=base._w2, _e=extra_spring: _b(w) + _e,
        _d=base._d,
    )
    return resp, info


def steady_force_coefficient(
    geom: CavityGeometry, mech: MechanicalOscillator, drive: DriveField, q: float
) -> float:
    """Restoring coefficient 2 hbar xi_Q |b_s(q)|^2 + m wM^2 at position q.

    Positive for every q, which is why q_s = 0 is the unique steady state
    of the node configuration.
    """
    xi_Q = quadratic_coupling(geom, drive.n)
    gamma = geom.gamma
    f_in = drive.input_amplitude(reference_frequency(geom, drive.n))
    delta_q = drive.delta + xi_Q * q * q
    b_sq = gamma * f_in**2 / (delta_q**2 + (gamma / 2.0) ** 2)
    return 2.0 * HBAR * xi_Q * b_sq + mech.m * mech.omega_M**2
