"""Exception types raised across the package."""


class ValidationError(ValueError):
    """Input violates a documented precondition."""


class DimensionError(ValidationError):
    """Objects of incompatible Hilbert-space dimension were combined."""


class NoInformationError(ValueError):
    """The scenario carries no information about the parameter."""


class DegenerateConfigurationError(ValueError):
    """A closed-form expression hit a vanishing denominator."""
