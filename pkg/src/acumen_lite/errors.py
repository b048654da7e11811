"""Exception hierarchy shared by every stage of the interpreter."""

from __future__ import annotations


class AcumenError(Exception):
    """Base class for all errors raised by acumen_lite."""


class LexError(AcumenError):
    def __init__(self, message: str, line: int, column: int) -> None:
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}")


class ParseError(AcumenError):
    """Syntax error carrying the offending position and the tokens that would have been accepted."""

    def __init__(self, message: str, line: int, column: int, expected: frozenset[str] = frozenset()) -> None:
        self.message = message
        self.line = line
        self.column = column
        self.expected = expected
        detail = message
        if expected:
            detail += " (expected one of: " + ", ".join(sorted(expected)) + ")"
        super().__init__(f"{line}:{column}: {detail}")


class EvalError(AcumenError):
    """A runtime value error: kind mismatch, bad builtin call, unresolved name."""


class NumericError(EvalError):
    """Arithmetic failure such as division by zero or a domain error."""

    def __init__(self, message: str, operation: str = "") -> None:
        self.operation = operation
        super().__init__(message)


class ModelError(AcumenError):
    """Structural problem with a model: unknown class, arity mismatch, conflicting writers, cycles."""


class SimulationError(AcumenError):
    """Any failure raised while a simulation is running, tagged with the simulated time."""

    def __init__(self, message: str, time: float, cause: Exception | None = None) -> None:
        self.message = message
        self.time = time
        self.cause = cause
        super().__init__(f"t={time!r}: {message}")
