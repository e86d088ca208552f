"""Exception hierarchy shared by every engine."""

from __future__ import annotations


class PtltlError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(PtltlError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{line}:{col}: {message}"
        super().__init__(message)


class SortError(PtltlError):
    """Sort mismatch between a value and the position it is used in."""


class EvaluationError(PtltlError):
    """A term could not be evaluated (unbound variable, division by zero, ...)."""


class EmptyHistoryError(PtltlError):
    """``check`` was asked about a history with no sessions."""


class IndexOutOfRange(PtltlError):
    pass


class EngineCapabilityError(PtltlError):
    """The selected engine does not support a construct in the policy."""


class GuardError(PtltlError):
    """Malformed positive guard."""


class CompileError(PtltlError):
    """A po-judgement cannot be translated into a constraint formula."""


class BudgetExceeded(PtltlError):
    """A resource cap was hit; the answer is unknown."""
