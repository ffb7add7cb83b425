"""Exception hierarchy.

Errors caused by bad input (wrong parents, malformed expressions, violated
preconditions) derive from :class:`InputError`; the CLI maps those to exit
code 2. :class:`CheckFailed` signals a failed verification (exit code 1).
"""

from __future__ import annotations


class FuncSpecError(Exception):
    """Base class for every error raised by this package."""


class InputError(FuncSpecError, ValueError):
    pass


class NotAUnit(InputError):
    pass


class ShapeMismatch(InputError):
    pass


class ParentMismatch(InputError):
    pass


class UnknownGenerator(InputError):
    pass


class UnknownIdentifier(UnknownGenerator):
    pass


class ExpressionSyntaxError(InputError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class NotMaximal(InputError):
    pass


class NotFinite(InputError):
    pass


class NotAField(InputError):
    pass


class TooLarge(InputError):
    pass


class GroundSetMismatch(InputError):
    pass


class FIPViolated(InputError):
    """Raised by :func:`fip_filter`; ``witness`` lists member indices with empty intersection."""

    def __init__(self, message: str, witness: tuple[int, ...]):
        super().__init__(message)
        self.witness = witness


class NotUnitValued(InputError):
    def __init__(self, message: str, position: int):
        super().__init__(message)
        self.position = position


class NotDivisible(InputError):
    def __init__(self, message: str, witness: int):
        super().__init__(message)
        self.witness = witness


class NotOverP(InputError):
    pass


class PreconditionFailed(InputError):
    def __init__(self, message: str, witness: int):
        super().__init__(message)
        self.witness = witness


class NotIntegerValued(InputError):
    def __init__(self, message: str, witness: int):
        super().__init__(message)
        self.witness = witness


class CheckFailed(FuncSpecError):
    """A verification did not hold; ``witness`` carries a distinguishing element."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness
