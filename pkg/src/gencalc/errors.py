"""Exception types shared across the package."""

from __future__ import annotations


class GencalcError(Exception):
    """Base class for all errors raised by gencalc."""


class ParseError(GencalcError):
    """Lexing or parsing failure, carrying the 0-based character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class EvalError(GencalcError):
    """Expression or signal evaluation failure, carrying the input point."""

    def __init__(self, message: str, x=None):
        if x is not None:
            message = f"{message} (at x={x!r})"
        super().__init__(message)
        self.x = x


class DomainError(GencalcError):
    """Input lies outside the domain where an operation is defined."""


class SingularStencilError(GencalcError):
    """The local fit system has no unique solution (e.g. duplicate nodes)."""


class LimitEvaluationError(GencalcError):
    """Evaluation of the pre-limit quotient failed at some step size."""

    def __init__(self, delta: float):
        super().__init__(f"quotient evaluation failed at step delta={delta!r}")
        self.delta = delta


class NonConvergenceError(GencalcError):
    """The numerical limit diverged or produced no significant digits."""

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class NonUniformGridError(GencalcError):
    """A sampled signal's x column is not uniformly spaced."""


class CsvFormatError(GencalcError):
    """A CSV file does not match the expected schema, carrying the line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"{message} (line {line})")
        self.line = line


class OffGridError(GencalcError):
    """A requested point does not coincide with a grid node."""


class AliasingError(GencalcError):
    """A sampled transform would alias (window tail too large at the edges)."""


class BranchChoiceWarning(UserWarning):
    """A multivalued linearization had to pick a branch; principal was chosen."""
