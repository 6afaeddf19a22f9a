"""Exception types shared across the package."""


class GkzError(Exception):
    """Base class for all errors raised by gkzcm."""


class DimensionError(GkzError, ValueError):
    """Exponent vectors, weights or matrices of incompatible length."""


class RingMismatchError(GkzError, ValueError):
    """Operands live in different rings or algebras."""


class UndefinedInputError(GkzError, ValueError):
    """The operation is undefined for this input (typically the zero polynomial)."""


class UnsupportedWeightError(GkzError, ValueError):
    """Weight vector outside the range the Groebner machinery accepts."""


class GradingError(GkzError, ValueError):
    """Input is not homogeneous for the ring's grading."""


class EmptyVarietyError(GkzError, ValueError):
    """The ideal is the unit ideal, so the quotient is the zero module."""


class MatrixValidationError(GkzError, ValueError):
    """An integer matrix violates one of the standing assumptions on A.

    ``violation`` names the failed assumption: one of ``ragged``,
    ``token``, ``empty``, ``rank``, ``zero-column``, ``pointed``,
    ``lattice``, ``size``.
    """

    def __init__(self, violation, message):
        super().__init__(f"{violation}: {message}")
        self.violation = violation


class InconclusiveError(GkzError):
    """A bounded search could not certify its answer inside the given box."""


class UnsupportedDimensionError(GkzError, ValueError):
    """The operation is only implemented for a specific row count d."""


class ParseError(GkzError, ValueError):
    """Malformed polynomial or matrix text."""
