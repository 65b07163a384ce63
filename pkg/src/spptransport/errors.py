"""Exception types shared across the package."""


class SppTransportError(Exception):
    """Base class for all package errors."""


class DomainError(SppTransportError, ValueError):
    """Input outside the mathematical domain of an operation."""


class IntegrationError(SppTransportError):
    """Quadrature failed to reach the requested tolerance.

    Carries the achieved absolute error estimate so callers can decide
    whether the partial result is still usable.
    """

    def __init__(self, message, error_estimate=None):
        super().__init__(message)
        self.error_estimate = error_estimate


class RootFindError(SppTransportError):
    """Root finder did not converge (distinct from 'no mode exists')."""


class InsufficientDataError(SppTransportError, ValueError):
    """Not enough samples to carry out the requested estimate."""


class StiffnessError(SppTransportError):
    """ODE integrator step size underflowed; carries the time reached."""

    def __init__(self, message, t_reached=None):
        super().__init__(message)
        self.t_reached = t_reached


class ConfigError(SppTransportError, ValueError):
    """Scenario configuration is malformed; carries the offending key."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key
