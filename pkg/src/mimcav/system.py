"""Parameter containers for the three-mirror cavity system.

All quantities are SI; every frequency-like quantity is angular [rad/s].
The CLI layer converts Hz inputs on load.
"""

from __future__ import annotations

from dataclasses import dataclass

from .constants import C_LIGHT, HBAR
from .exceptions import ConfigError


@dataclass(frozen=True)
class CavityGeometry:
    """Three-mirror cavity geometry.

    Parameters
    ----------
    L : float
        Sub-cavity length (middle mirror to either end mirror) [m].
    T : float
        Middle-mirror intensity transmissivity [-].
    T_end : float
        End-mirror intensity transmissivity [-]; enters only through the
        cavity decay rate, the mode calculation treats the end mirrors as
        perfect reflectors.
    gamma_override : float or None
        Optional cavity decay rate [1/s] replacing c*T_end/(2L).  Lets a
        measured linewidth or a finesse-derived value be used directly.
    """

    L: float
    T: float
    T_end: float = 0.0
    gamma_override: float | None = None

    def __post_init__(self):
        if not self.L > 0.0:
            raise ConfigError(f"sub-cavity length must be positive, got {self.L}")
        if not 0.0 <= self.T <= 1.0:
            raise ConfigError(f"middle-mirror transmissivity must be in [0, 1], got {self.T}")
        if not 0.0 <= self.T_end <= 1.0:
            raise ConfigError(f"end-mirror transmissivity must be in [0, 1], got {self.T_end}")
        if self.gamma_override is not None and self.gamma_override < 0.0:
            raise ConfigError("cavity decay rate override must be >= 0")

    @property
    def tau(self) -> float:
        """Sub-cavity round-trip time 2L/c [s]."""
        return 2.0 * self.L / C_LIGHT

    @property
    def gamma(self) -> float:
        """Cavity decay rate through the input mirror, c*T_end/(2L) [1/s]."""
        if self.gamma_override is not None:
            return self.gamma_override
        return C_LIGHT * self.T_end / (2.0 * self.L)


@dataclass(frozen=True)
class MechanicalOscillator:
    """Suspended middle mirror treated as a damped harmonic oscillator.

    m [kg], omega_M [rad/s], D_M [kg/s], T_e [K], q0 (rest position) [m].
    """

    m: float
    omega_M: float
    D_M: float
    T_e: float
    q0: float = 0.0

    def __post_init__(self):
        if not self.m > 0.0:
            raise ConfigError("mirror mass must be positive")
        if not self.omega_M > 0.0:
            raise ConfigError("mechanical frequency must be positive")
        if self.D_M < 0.0:
            raise ConfigError("damping constant must be >= 0")
        if self.T_e < 0.0:
            raise ConfigError("bath temperature must be >= 0")

    @property
    def quality_factor(self) -> float:
        """Mechanical quality factor m*omega_M/D_M [-]."""
        return self.m * self.omega_M / self.D_M if self.D_M > 0 else float("inf")


@dataclass(frozen=True)
class DriveField:
    """One input laser beam addressing a single resonator mode.

    P_in [W]; delta = (addressed mode frequency) - (laser frequency)
    [rad/s], so delta > 0 is red detuning; branch selects the even or odd
    member of the doublet; n is the targeted mode number.
    """

    P_in: float
    delta: float
    branch: str
    n: int

    def __post_init__(self):
        if self.P_in < 0.0:
            raise ConfigError("input power must be >= 0")
        if self.branch not in ("even", "odd"):
            raise ConfigError(f"branch must be 'even' or 'odd', got {self.branch!r}")
        if self.n < 1:
            raise ConfigError("mode number must be >= 1")

    def input_amplitude(self, omega_n: float) -> float:
        """Input field amplitude |b_in| = sqrt(P_in/(hbar*omega_n)) [sqrt(photons/s)]."""
        return (self.P_in / (HBAR * omega_n)) ** 0.5
