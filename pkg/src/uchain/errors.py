"""Exception taxonomy shared by every module.

Each exception carries a stable machine-readable ``kind`` (its class
name) plus a human ``detail`` string; the CLI maps the four categories
onto process exit codes:

    ParseError          -> 3   malformed input text
    ValidationError     -> 1   an object violates its defining identities
    PreconditionError   -> 2   an operation was called outside its domain
    InternalCheckError  -> 4   a cross-check that can only fail on a bug
"""

from __future__ import annotations


class UChainError(Exception):
    exit_code = 1

    def __init__(self, detail: str = ""):
        super().__init__(detail)
        self.detail = detail

    @property
    def kind(self) -> str:
        return type(self).__name__


class ParseError(UChainError):
    exit_code = 3

    def __init__(self, detail: str, line: int | None = None, token: str | None = None):
        if line is not None:
            detail = f"line {line}: {detail}"
        if token is not None:
            detail = f"{detail} (at {token!r})"
        super().__init__(detail)
        self.line = line
        self.token = token


class ValidationError(UChainError):
    exit_code = 1


class PreconditionError(UChainError):
    exit_code = 2


class InternalCheckError(UChainError):
    exit_code = 4


# -- validation: the object itself is malformed ------------------------------

class DifferentialNotSquareZero(ValidationError):
    pass


class GradingViolation(ValidationError):
    pass


class DuplicateGenerator(ValidationError):
    pass


class ExponentOverflow(ValidationError):
    pass


class NotAChainMap(ValidationError):
    pass


# -- preconditions: the call is outside the operation's domain ---------------

class NotAUnit(PreconditionError):
    pass


class BothZero(PreconditionError):
    pass


class DegreeMismatch(PreconditionError):
    pass


class ComplexMismatch(PreconditionError):
    pass


class RankTooLarge(PreconditionError):
    pass


class NotACycle(PreconditionError):
    pass


class NotACycleInPlus(PreconditionError):
    pass


class InfinityNotZero(PreconditionError):
    pass


class NotUFree(PreconditionError):
    pass


class ParameterOutOfRange(PreconditionError):
    pass


# -- internal cross-checks: mathematically unreachable, kept defensive -------

class NotInImage(InternalCheckError):
    pass


class CrossCheckMismatch(InternalCheckError):
    pass
