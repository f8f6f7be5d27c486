"""Exception types shared across the package."""


class DmodError(Exception):
    """Base class for all package errors."""


class ContextMismatch(DmodError):
    """Operands belong to different algebra contexts."""


class NotHolonomic(DmodError):
    """An operation requiring holonomic input received a non-holonomic module."""


class LocalizationRequired(DmodError):
    """Rational solutions need localization data that was not supplied."""


class LiftCapExceeded(DmodError):
    """The successive-powers denominator search exceeded its cap."""


class NotInImage(DmodError):
    """A preimage was requested for an element outside the image."""


class NotChainMap(DmodError):
    """The supplied top map does not commute with the differentials."""


class NotStrict(DmodError):
    """A complex fails the filtration-strictness entry inequality."""


class NotSpecializable(DmodError):
    """The b-function elimination ideal is zero."""


class ContainmentViolated(DmodError):
    """quotient_basis received an image space not contained in the kernel."""


class NotAProduct(DmodError):
    """A Poincare polynomial does not factor into (1+q^(2j-1)) factors."""


class ParseError(DmodError):
    """Problem-file or operator syntax error, with source location."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = "%d:%d: %s" % (line, column, message)
        super().__init__(message)


class InternalCapExceeded(DmodError):
    """An internal iteration cap was hit (resolution length, point search)."""
