"""Exception types raised by the toolkit.

Each operation documents which of these it can raise; everything derives
from :class:`MimcavError` so callers can catch toolkit failures in one go.
"""


class MimcavError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(MimcavError):
    """Invalid or inconsistent run configuration."""


class InvalidModeNumberError(MimcavError):
    """Mode number must be a positive integer."""


class DegenerateEquationError(MimcavError):
    """The transcendental mode equation degenerates at T = 0."""


class WindowTooNarrowError(MimcavError):
    """No root of the mode equation was bracketed inside the window."""


class OutOfValidityRangeError(MimcavError):
    """Mirror displacement outside the validity range of the closed form."""


class WrongRegimeError(MimcavError):
    """Rest position falls in the other coupling regime."""


class DivergentCouplingError(MimcavError):
    """Quadratic coupling diverges for a perfectly reflecting mirror."""


class AntitrappingConfigurationError(MimcavError):
    """Driving the lower (even) mode at a frequency minimum anti-traps."""


class DegenerateParametersError(MimcavError):
    """Rates are all zero; expansion coefficients are undefined."""


class IntegrationFailureError(MimcavError):
    """Adaptive quadrature failed to converge."""


class UnstableSystemError(MimcavError):
    """Refusing to integrate a linearly unstable system."""


class StepSizeError(MimcavError):
    """Integration step too large for the fastest system rate."""


class StatisticsError(MimcavError):
    """Not enough stationary data for the requested estimate."""


class FitError(MimcavError):
    """Spectral peak could not be resolved or fitted."""


class DesignInfeasibleError(MimcavError):
    """Two-color design constraints cannot be satisfied."""


class PlacementError(MimcavError):
    """Mirror placement fails the regime checks of the two-color design."""


class UnstableDesignError(MimcavError):
    """Designed operating point fails the linear stability check."""
