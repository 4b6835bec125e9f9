"""Exception hierarchy shared by every module."""


class SpecsatError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgument(SpecsatError, ValueError):
    """An argument violates an operation's precondition."""


class UnsupportedSize(SpecsatError):
    """The input exceeds a configured size cap."""


class ParseError(SpecsatError, ValueError):
    """Malformed interchange text.

    ``offset`` is the 0-based byte position of the offending character.
    """

    def __init__(self, msg, offset=None):
        if offset is not None:
            msg = f"{msg} (offset {offset})"
        super().__init__(msg)
        self.offset = offset


class WalkOverflowError(SpecsatError, OverflowError):
    """Walk length beyond the guarded range."""


class DivergenceRisk(SpecsatError, ValueError):
    """A walk series was requested at a point where it may not converge."""


class UnsupportedRegime(SpecsatError):
    """A root bracket assumption does not hold for this input."""


class NumericError(SpecsatError, ArithmeticError):
    """A numeric procedure failed; ``diagnostics`` carries the details."""

    def __init__(self, msg, diagnostics=None):
        super().__init__(msg)
        self.diagnostics = diagnostics or {}


class FamilyMismatchError(SpecsatError):
    """Family descriptors disagree with true isomorphism classes."""
