"""Canonical parameter sets.

``table_system`` carries the widely used membrane-in-the-middle numbers:
5 mm sub-cavities, a 1 ug mirror at 2 pi x 2.5 kHz with damping
0.02 ug Hz, middle transmissivity 1e-4, end transmissivity 1e-5, mode
number 1e4 (lambda_n = 1 um), bath at 300 K.  The decay rate follows
gamma = c T_end/(2L) = 3.0e5 1/s; quoted linewidths for this parameter
family vary by over an order of magnitude around that, so the geometry
accepts an explicit override.

``ground_state_reference`` is the two-beam linear trap-and-cool operating
point used by the acceptance suite: mechanical quality 1e6, optical
finesse 1e5 (T_end = 2 pi / finesse, so gamma = pi c/(L F)), 5 mW of
trapping light at delta = -2.5 gamma and 10 uW of cooling light at
delta = +0.5 gamma, mirror at q0 = -lambda_n/2 + lambda_n/10 where the
linear coupling is within 6e-5 of its bound xi.
"""

from __future__ import annotations

import numpy as np

from .constants import C_LIGHT
from .system import CavityGeometry, DriveField, MechanicalOscillator

TABLE_MODE_NUMBER = 10_000


def table_geometry() -> CavityGeometry:
    return CavityGeometry(L=5e-3, T=1e-4, T_end=1e-5)


def table_mechanics() -> MechanicalOscillator:
    lam = 2 * 5e-3 / TABLE_MODE_NUMBER
    return MechanicalOscillator(
        m=1e-9,
        omega_M=2 * np.pi * 2.5e3,
        D_M=2e-11,
        T_e=300.0,
        q0=-lam / 2 + lam / 10,
    )


def ground_state_reference(
    finesse: float = 1e5,
    quality: float = 1e6,
    trap_power: float = 5e-3,
    trap_delta_over_gamma: float = -2.5,
    cool_power: float = 1e-5,
    cool_delta_over_gamma: float = 0.5,
) -> tuple[CavityGeometry, MechanicalOscillator, DriveField, DriveField]:
    """(geometry, mechanics, trap drive, cool drive) of the reference point."""
    L = 5e-3
    geom = CavityGeometry(L=L, T=1e-4, T_end=2 * np.pi / finesse)
    lam = 2 * L / TABLE_MODE_NUMBER
    m = 1e-9
    omega_M = 2 * np.pi * 2.5e3
    mech = MechanicalOscillator(
        m=m,
        omega_M=omega_M,
        D_M=m * omega_M / quality,
        T_e=300.0,
        q0=-lam / 2 + lam / 10,
    )
    gamma = geom.gamma
    trap = DriveField(
        P_in=trap_power, delta=trap_delta_over_gamma * gamma, branch="even", n=TABLE_MODE_NUMBER
    )
    cool = DriveField(
        P_in=cool_power, delta=cool_delta_over_gamma * gamma, branch="even", n=TABLE_MODE_NUMBER
    )
    return geom, mech, trap, cool
