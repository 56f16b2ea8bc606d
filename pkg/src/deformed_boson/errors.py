"""Exception hierarchy shared by every module."""


class DeformedBosonError(Exception):
    """Base class for all errors raised by this package."""


class SpecError(DeformedBosonError, ValueError):
    """A deformation specification (or its JSON document) is invalid."""


class LevelCapError(DeformedBosonError, IndexError):
    """A Fock level at or beyond the level cap was requested."""


class UnsupportedKindError(DeformedBosonError, ValueError):
    """The operation is not defined for this kind of deformation."""


class IncompatibleError(DeformedBosonError, ValueError):
    """Operands live on different truncations or ladder tables."""


class TruncationError(DeformedBosonError, ValueError):
    """The requested result cannot be computed exactly at this truncation."""


class DegenerateDeformationError(DeformedBosonError, ArithmeticError):
    """The ladder function vanishes (or is negative) at some level.

    Attributes
    ----------
    level : int
        First ladder level ``j >= 1`` at which ``F(j)`` is not strictly
        positive.
    """

    def __init__(self, level, message=None):
        self.level = level
        if message is None:
            message = f"degenerate deformation: F({level}) vanishes"
        super().__init__(message)
