"""Exception types shared across the package."""


class CfsymError(Exception):
    """Base class for all domain errors raised by cfsym."""


class DomainError(CfsymError):
    """An argument is outside the mathematical domain of an operation."""


class SizeError(CfsymError):
    """A request exceeds a configured size or work budget."""


class QuadratureError(CfsymError):
    """Adaptive quadrature failed to converge within its subdivision cap."""
