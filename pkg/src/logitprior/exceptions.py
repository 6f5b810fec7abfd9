"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class InversionError(ArithmeticError):
    """Numerical inversion of a characteristic function produced an invalid density."""


class PreconditionError(ValueError):
    """Input data violate a structural precondition of the operation."""
