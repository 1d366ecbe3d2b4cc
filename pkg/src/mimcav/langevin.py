"""Time-domain integration of the linearized fluctuation dynamics.

Integrates du = M u dt + dW for the Ornstein-Uhlenbeck system defined by
a drift matrix M and diagonal noise intensities: the optical quadrature
channels receive vacuum noise of spectral weight gamma * vacuum_psd each
and the momentum channel thermal force noise of intensity
N = 2 D_M k_B T_e.  The resulting ensembles provide a statistical oracle
for the effective frequency, damping, and temperature predicted by the
frequency-domain modules.

State layouts: (dX_b, dY_b, dq, dp) for the single-mode quadratic
configuration, (dX_a, dY_a, dX_b, dY_b, dq, dp) for the two-mode linear
configuration; position and momentum are always the last two components.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cholesky, expm
from scipy.optimize import curve_fit

from .constants import HBAR, K_B
from .exceptions import FitError, StatisticsError, StepSizeError, UnstableSystemError
from .system import CavityGeometry, DriveField, MechanicalOscillator

# symmetrized vacuum quadrature spectrum: <{X(t), X(t')}>/2 = (1/2) delta
VACUUM_PSD = 0.5
MAX_EIG_DT = 0.05  # dt must resolve the fastest rate: dt <= 0.05/max|eig|


@dataclass(frozen=True)
class NoiseSpec:
    """Noise channels for the fluctuation SDE.

    vacuum_rate: cavity decay gamma feeding the optical quadratures [1/s].
    thermal_strength: white force-noise intensity N = 2 D_M k_B T_e [N^2 s].
    seed: master seed; identical seeds reproduce ensembles bit for bit.
    vacuum_psd: per-quadrature spectral weight of the vacuum inputs.
    """

    vacuum_rate: float
    thermal_strength: float
    seed: int
    vacuum_psd: float = VACUUM_PSD

    @classmethod
    def from_system(cls, geom: CavityGeometry, mech: MechanicalOscillator, seed: int) -> "NoiseSpec":
        return cls(
            vacuum_rate=geom.gamma,
            thermal_strength=2.0 * mech.D_M * K_B * mech.T_e,
            seed=seed,
        )

    def intensities(self, dim: int) -> np.ndarray:
        """Diagonal noise intensities for a dim-dimensional state."""
        if dim < 2 or dim % 2:
            raise ValueError("state dimension must be even and >= 2")
        out = np.full(dim, self.vacuum_rate * self.vacuum_psd)
        out[-2] = 0.0  # position row is noiseless
        out[-1] = self.thermal_strength
        return out


@dataclass(frozen=True)
class TrajectoryEnsemble:
    """Stored trajectories of one simulation run.

    states has shape (n_traj, n_stored, dim); times are the stored
    instants [s]; M is the shared drift matrix.
    """

    dt: float
    duration: float
    n_traj: int
    times: np.ndarray
    states: np.ndarray
    M: np.ndarray
    method: str
    seed: int

    @property
    def dim(self) -> int:
        return self.M.shape[0]

    @property
    def mass(self) -> float:
        """Mirror mass read off the q-row of the drift matrix [kg]."""
        return 1.0 / self.M[-2, -1]

    def position(self) -> np.ndarray:
        """(n_traj, n_stored) displacement fluctuation record."""
        return self.states[:, :, -2]

    def relaxation_time(self) -> float:
        """Slowest decay time 1/min(-Re eig(M)) [s]."""
        rates = -np.linalg.eigvals(self.M).real
        return 1.0 / float(np.min(rates))


def _van_loan_discretization(M: np.ndarray, intens: np.ndarray, dt: float):
    """Exact one-step propagator and noise Cholesky factor for the OU system."""
    dim = M.shape[0]
    D = np.diag(intens)
    block = np.zeros((2 * dim, 2 * dim))
    block[:dim, :dim] = -M
    block[:dim, dim:] = D
    block[dim:, dim:] = M.T
    F = expm(block * dt)
    Ad = F[dim:, dim:].T
    Qd = Ad @ F[:dim, dim:]
    Qd = 0.5 * (Qd + Qd.T)
    # channel variances span ~20 decades (optical vacuum vs thermal force);
    # factorize the correlation matrix so regularization stays relative,
    # and keep noiseless channels exactly noiseless
    diag = np.clip(np.diag(Qd), 0.0, None)
    live = diag > 0.0
    if not np.any(live):
        return Ad, np.zeros((dim, dim))
    scale = np.where(live, np.sqrt(diag), 1.0)
    corr = Qd / np.outer(scale, scale)
    corr[~live, :] = 0.0
    corr[:, ~live] = 0.0
    reg = np.where(live, 1e-12, 1.0)  # unit diagonal keeps dead rows factorizable
    try:
        Lc = cholesky(corr + np.diag(reg), lower=True)
    except np.linalg.LinAlgError:
        w, V = np.linalg.eigh(corr)
        Lc = V @ np.diag(np.sqrt(np.clip(w, 0.0, None)))
    Lc[~live, :] = 0.0
    return Ad, np.where(live, scale, 0.0)[:, None] * Lc


def simulate(
    M: np.ndarray,
    noise: NoiseSpec,
    dt: float,
    duration: float,
    n_traj: int,
    method: str = "euler",
    u0: np.ndarray | None = None,
    store_every: int = 1,
    allow_unstable: bool = False,
) -> TrajectoryEnsemble:
    """Integrate the fluctuation SDE for an ensemble of trajectories.

    ``method`` is "euler" (Euler-Maruyama, transparent but O(dt) biased)
    or "exact" (exact OU one-step sampling via the matrix exponential).
    Trajectories start at ``u0`` (default 0) and every ``store_every``-th
    step is recorded, including the initial state.

    Raises
    ------
    UnstableSystemError
        If M has an eigenvalue with positive real part and
        ``allow_unstable`` is not set.
    StepSizeError
        If dt > 0.05 / max|eigenvalue|.
    """
    from .dynamics import stability  # local to avoid cycle at import time

    M = np.asarray(M, dtype=float)
    dim = M.shape[0]
    if method not in ("euler", "exact"):
        raise ValueError(f"unknown method {method!r}")
    report = stability(M)
    if not report.stable and not allow_unstable:
        raise UnstableSystemError(
            "drift matrix has a growing mode; pass allow_unstable=True to force"
        )
    max_eig = float(np.max(np.abs(report.eigenvalues)))
    if max_eig > 0 and dt > MAX_EIG_DT / max_eig:
        raise StepSizeError(
            f"dt = {dt} exceeds {MAX_EIG_DT}/max|eig| = {MAX_EIG_DT / max_eig:.3e}"
        )
    n_steps = int(round(duration / dt))
    intens = noise.intensities(dim)
    rng = np.random.default_rng(noise.seed)

    u = np.zeros((n_traj, dim)) if u0 is None else np.tile(np.asarray(u0, dtype=float), (n_traj, 1))
    n_stored = n_steps // store_every + 1
    states = np.empty((n_traj, n_stored, dim))
    states[:, 0, :] = u
    times = np.arange(n_stored) * (store_every * dt)

    if method == "euler":
        A = np.eye(dim) + M * dt
        scale = np.sqrt(intens * dt)
        stored = 1
        for k in range(1, n_steps + 1):
            u = u @ A.T + rng.standard_normal((n_traj, dim)) * scale
            if k % store_every == 0:
                states[:, stored, :] = u
                stored += 1
    else:
        Ad, Lc = _van_loan_discretization(M, intens, dt)
        stored = 1
        for k in range(1, n_steps + 1):
            u = u @ Ad.T + rng.standard_normal((n_traj, dim)) @ Lc.T
            if k % store_every == 0:
                states[:, stored, :] = u
                stored += 1
    return TrajectoryEnsemble(
        dt=dt,
        duration=n_steps * dt,
        n_traj=n_traj,
        times=times,
        states=states[:, :stored, :],
        M=M,
        method=method,
        seed=noise.seed,
    )


@dataclass(frozen=True)
class VarianceEstimate:
    mean_sq: float
    stderr: float
    n_traj: int
    burn_in: float


def estimate_variance(ens: TrajectoryEnsemble, burn_in: float) -> VarianceEstimate:
    """Stationary <dq^2> with a jackknife standard error over trajectories.

    Raises
    ------
    StatisticsError
        If fewer than 50 relaxation times of stationary data remain after
        the burn-in, or fewer than 2 trajectories.
    """
    tau = ens.relaxation_time()
    usable = ens.duration - burn_in
    if usable < 50.0 * tau:
        raise StatisticsError(
            f"need >= 50 relaxation times ({50 * tau:.3g} s) after burn-in, have {usable:.3g} s"
        )
    if ens.n_traj < 2:
        raise StatisticsError("need at least 2 trajectories for a standard error")
    q = ens.position()[:, ens.times >= burn_in]
    per_traj = np.mean(q * q, axis=1)
    mean = float(np.mean(per_traj))
    n = per_traj.size
    jack = (n * mean - per_traj) / (n - 1)
    stderr = float(np.sqrt((n - 1) / n * np.sum((jack - np.mean(jack)) ** 2)))
    return VarianceEstimate(mean_sq=mean, stderr=stderr, n_traj=n, burn_in=burn_in)


@dataclass(frozen=True)
class SpectrumFit:
    """Ensemble-averaged displacement spectrum and its resonance fit."""

    omega: np.ndarray
    psd: np.ndarray
    psd_err: np.ndarray
    omega_eff_fit: float
    omega_eff_err: float
    D_eff_fit: float
    D_eff_err: float
    amplitude_fit: float

    def model(self, omega):
        w = np.asarray(omega, dtype=float)
        g = self.D_eff_fit / self._mass
        return self.amplitude_fit / ((self.omega_eff_fit**2 - w**2) ** 2 + (g * w) ** 2)

    _mass: float = 1.0


def _lorentzian_sq(w, a, w_eff, g):
    return a / ((w_eff**2 - w**2) ** 2 + (g * w) ** 2)


def estimate_spectrum(ens: TrajectoryEnsemble, burn_in: float) -> SpectrumFit:
    """Periodogram of dq averaged over trajectories, fitted to |chi|^2 shape.

    The model a / ((w_eff^2 - w^2)^2 + (D_eff w / m)^2) is fitted by
    weighted least squares with per-bin errors psd/sqrt(n_traj); returns
    the fitted effective frequency and damping with their standard errors.

    Raises
    ------
    FitError
        If the resonance is unresolved at the available frequency
        resolution, or the fit fails.
    """
    q = ens.position()[:, ens.times >= burn_in]
    n_traj, n_samp = q.shape
    if n_samp < 16:
        raise StatisticsError("too few stored samples for a spectrum")
    dt_s = float(ens.times[1] - ens.times[0])
    # Hann-tapered one-sided periodogram in angular frequency, averaged
    # over trajectories; the taper kills the sinc^2 leakage tails that
    # would otherwise widen the fitted resonance
    win = np.hanning(n_samp)
    spec = np.fft.rfft(q * win, axis=1)
    psd_traj = (np.abs(spec) ** 2) * (dt_s / (2.0 * np.pi * np.sum(win**2)))
    if n_samp % 2 == 0:
        psd_traj[:, 1:-1] *= 2.0  # Nyquist bin is not duplicated
    else:
        psd_traj[:, 1:] *= 2.0
    omega = 2.0 * np.pi * np.fft.rfftfreq(n_samp, d=dt_s)
    psd = psd_traj.mean(axis=0)
    psd_err = psd / np.sqrt(n_traj)

    keep = omega > 0
    w, s, serr = omega[keep], psd[keep], psd_err[keep]
    i_pk = int(np.argmax(s))
    # fit a band around the resonance: far tail bins carry aliasing from
    # the unfiltered decimation and would bias the width
    band = w <= min(5.0 * w[i_pk], 0.5 * w[-1])
    w, s, serr = w[band], s[band], serr[band]
    i_pk = int(np.argmax(s))
    w_pk = w[i_pk]
    # crude width from the half-maximum crossing right of the peak
    above = s >= 0.5 * s[i_pk]
    j = i_pk
    while j + 1 < s.size and above[j + 1]:
        j += 1
    g0 = max(2.0 * (w[min(j + 1, s.size - 1)] - w_pk), w[1] - w[0])
    a0 = s[i_pk] * (g0 * w_pk) ** 2
    try:
        popt, pcov = curve_fit(
            _lorentzian_sq, w, s, p0=(a0, w_pk, g0), sigma=serr,
            absolute_sigma=True, maxfev=20000,
        )
    except RuntimeError as exc:
        raise FitError(f"resonance fit did not converge: {exc}") from exc
    a_fit, w_fit, g_fit = popt
    if not np.isfinite(pcov).all():
        raise FitError("singular fit covariance; resonance unresolved")
    dw = w[1] - w[0]
    if dw > abs(g_fit) / 2.0 / 5.0:
        raise FitError(
            f"frequency resolution {dw:.3g} too coarse for half-width {abs(g_fit) / 2:.3g}"
        )
    m = ens.mass
    err = np.sqrt(np.diag(pcov))
    return SpectrumFit(
        omega=w,
        psd=s,
        psd_err=serr,
        omega_eff_fit=float(abs(w_fit)),
        omega_eff_err=float(err[1]),
        D_eff_fit=float(abs(g_fit) * m),
        D_eff_err=float(err[2] * m),
        amplitude_fit=float(a_fit),
        _mass=m,
    )


def linear_fluctuation_matrix(
    geom: CavityGeometry,
    mech: MechanicalOscillator,
    drives,
    xi_L: float,
    q_s: float = 0.0,
) -> np.ndarray:
    """Drift matrix of the two-mode linear configuration.

    ``drives`` is a pair (drive_a, drive_b) for the mode rising as -xi_L q
    (a, even) and the mode rising as +xi_L q (b, odd); pass None for an
    unpumped mode.  State ordering (dX_a, dY_a, dX_b, dY_b, dq, dp).  The
    derivation (linearizing the coupled field-mirror equations about the
    steady amplitudes a_s, b_s) is documented in docs/linear_fluctuations.md;
    its mechanical susceptibility reproduces the closed-form effective
    parameters of the dynamics module identically.
    """
    from .modespectrum import reference_frequency

    drive_a, drive_b = drives
    gamma = geom.gamma
    M = np.zeros((6, 6))
    M[4, 5] = 1.0 / mech.m
    M[5, 4] = -mech.m * mech.omega_M**2
    M[5, 5] = -mech.D_M / mech.m

    for idx, (drive, sign) in enumerate(((drive_a, -1.0), (drive_b, +1.0))):
        r = 2 * idx
        if drive is None:
            M[r, r] = M[r + 1, r + 1] = -gamma / 2.0
            continue
        delta_eff = drive.delta + sign * xi_L * q_s
        f_in = drive.input_amplitude(reference_frequency(geom, drive.n))
        amp = np.sqrt(gamma) * f_in / (gamma / 2.0 + 1j * delta_eff)
        # optical block
        M[r, r] = -gamma / 2.0
        M[r, r + 1] = delta_eff
        M[r + 1, r] = -delta_eff
        M[r + 1, r + 1] = -gamma / 2.0
        # detuning modulation by the mirror: d(delta_eff)/dq = sign * xi_L
        M[r, 4] = sign * np.sqrt(2.0) * xi_L * amp.imag
        M[r + 1, 4] = -sign * np.sqrt(2.0) * xi_L * amp.real
        # radiation pressure on the momentum: force = -sign * hbar xi_L |mode|^2
        M[5, r] = -sign * np.sqrt(2.0) * HBAR * xi_L * amp.real
        M[5, r + 1] = -sign * np.sqrt(2.0) * HBAR * xi_L * amp.imag
    return M
