"""Exception types raised by soefgt."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation accepts."""


class StructuralError(ValueError):
    """An SOE does not have the structure an operation requires."""


class NumericalFailure(ArithmeticError):
    """A numerical procedure failed to produce a trustworthy result."""
