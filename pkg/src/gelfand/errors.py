"""Exception types shared across the package."""


class GelfandError(Exception):
    """Base class for all errors raised by this package."""


class NotPrime(GelfandError):
    """The given characteristic (or claimed prime power) is not valid."""


class ModulusNotMonic(GelfandError):
    """An extension modulus must be monic."""


class ModulusReducible(GelfandError):
    """An extension modulus must be irreducible over the prime field."""


class FieldMismatch(GelfandError):
    """Operands belong to different fields."""


class DivisionByZero(GelfandError, ZeroDivisionError):
    """Division or inversion of zero in a field."""


class NotMonic(GelfandError):
    """A polynomial operation required a monic input."""


class NotSquarefree(GelfandError):
    """A polynomial operation required a squarefree input."""


class SingularInput(GelfandError):
    """A matrix operation required an invertible input."""


class TooLarge(GelfandError):
    """An enumeration would exceed its resource bound."""


class NotSigmaSymmetric(GelfandError):
    """The matrix is not fixed by the J-twisted transpose anti-involution."""


class NotSemisimple(GelfandError):
    """The matrix has a non-squarefree minimal polynomial."""


class ZeroInput(GelfandError):
    """A nonzero scalar was required."""


class DegenerateForm(GelfandError):
    """A restricted form turned out degenerate; carries a witness."""


class OddEDimension(GelfandError):
    """A primary component has odd dimension over its extension field."""


class InvariantViolation(GelfandError):
    """An internal invariant that should be unconditionally true failed."""
