"""Exception and warning types shared across the package."""


class DressedLatError(Exception):
    """Base class for all package errors."""


class ConfigError(DressedLatError, ValueError):
    """Malformed or physically invalid run configuration."""


class NumericError(DressedLatError, ArithmeticError):
    """A computation could not produce a trustworthy number."""


class SingularInputError(NumericError):
    """An expansion was requested exactly at its singular point."""


class ResolutionError(NumericError):
    """Position grid too coarse for the comb being evaluated."""


class ConvergenceError(NumericError):
    """Iterative eigensolver hit its iteration cap."""


class DomainError(DressedLatError, ValueError):
    """No solution exists inside the requested bracket."""


class ModelValidityWarning(UserWarning):
    """Inputs are outside the regime where the nearest-resonance model holds."""
