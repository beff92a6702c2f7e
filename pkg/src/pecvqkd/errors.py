"""Exception hierarchy shared by every module."""


class DomainError(Exception):
    """Base class for errors raised by the simulation core."""

    code = "domain_error"


class InvalidParameter(DomainError, ValueError):
    code = "invalid_parameter"


class DegenerateConductivity(DomainError):
    """Total conductivity sigma_d + sigma_ph is zero; the material parameters are unphysical."""

    code = "degenerate_conductivity"


class NullOperatingPoint(DomainError):
    """Modulator biased at its transfer null, where the PE index is undefined."""

    code = "null_operating_point"


class InvalidCount(DomainError, ValueError):
    code = "invalid_count"


class NonPositiveCorrelation(DomainError):
    """<x_A x_B> <= 0, so the transmittance cannot be inverted."""

    code = "non_positive_correlation"


class ComplexEigenvalue(DomainError):
    code = "complex_eigenvalue"


class UnphysicalEigenvalue(DomainError):
    code = "unphysical_eigenvalue"


class InsufficientGrid(DomainError):
    code = "insufficient_grid"


class WindowTooSmall(DomainError):
    code = "window_too_small"
