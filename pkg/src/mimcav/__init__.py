"""Membrane-in-the-middle cavity optomechanics toolkit.

Mode spectrum, optomechanical couplings, steady states and stability,
radiation-modified mechanics, displacement-noise thermometry, stochastic
fluctuation simulation, and the two-color trap-and-cool design for a
three-mirror cavity with a partially transmitting middle mirror.
"""

from .bichromatic import (
    BichromaticDesign,
    DampingComparison,
    HybridPerformance,
    LinearSchemePerformance,
    combined_performance,
    damping_improvement,
    design,
    linear_scheme_performance,
    optimize_placement,
)
from .config import RunConfig, SdeSettings, load_config, parse_config
from .constants import C_LIGHT, HBAR, K_B
from .coupling import (
    CouplingConstants,
    bare_coupling,
    coupling_constants,
    coupling_regime,
    coupling_sweep,
    linear_coupling,
    linear_coupling_raw,
    linear_shifts,
    quadratic_coupling,
    quadratic_detuning,
)
from .dynamics import (
    EffectiveResponse,
    StabilityReport,
    SteadyState,
    TrapFrequencies,
    effective_params_linear,
    effective_params_quadratic,
    fluctuation_matrix,
    linear_response,
    max_trap_frequency,
    stability,
    steady_state_quadratic,
    system_response,
)
from .exceptions import MimcavError
from .langevin import (
    NoiseSpec,
    SpectrumFit,
    TrajectoryEnsemble,
    VarianceEstimate,
    estimate_spectrum,
    estimate_variance,
    linear_fluctuation_matrix,
    simulate,
)
from .modespectrum import (
    ModeBranchPoint,
    branch_frequencies,
    exact_wavenumbers,
    mode_pair_exact,
    mode_wavelength,
    reference_frequency,
    spectrum_sweep,
)
from .system import CavityGeometry, DriveField, MechanicalOscillator
from .thermometry import (
    CriticalFrequency,
    Susceptibility,
    TaylorCoefficients,
    ThermalSummary,
    critical_frequency,
    effective_temperature,
    occupation,
    susceptibility_at,
    taylor_coefficients,
    thermal_noise_strength,
    thermal_summary,
    variance_integral_analytic,
    variance_integral_numeric,
)

__version__ = "0.1.0"
