"""Exception hierarchy and the violation record used by validation passes."""

from __future__ import annotations

from dataclasses import dataclass


class S2DocError(Exception):
    """Base class for all errors raised by this library."""


class InvalidArgumentError(S2DocError, ValueError):
    """An operation received a value outside its contract."""


class NotFoundError(S2DocError, LookupError):
    """A referenced identifier does not resolve."""


class ConflictError(S2DocError):
    """An identifier or edge already exists."""


class CycleError(S2DocError):
    """An edge or graph state would violate acyclicity."""

    def __init__(self, message: str, nodes: tuple[str, ...] = ()):
        super().__init__(message)
        self.nodes = tuple(nodes)


class IncompleteStructureError(S2DocError):
    """A table's logical or functional model is missing required pieces."""

    def __init__(self, message: str, cells: tuple[str, ...] = ()):
        super().__init__(message)
        self.cells = tuple(cells)


class ParseError(S2DocError):
    """Input bytes could not be parsed.

    ``offset`` is a byte/character offset into the input when known,
    ``row`` a 1-based record number for line-oriented formats.
    """

    def __init__(self, message: str, *, offset: int | None = None, row: int | None = None):
        super().__init__(message)
        self.offset = offset
        self.row = row


class ExportError(S2DocError):
    """A document cannot be expressed in the requested output format."""

    def __init__(self, message: str, cells: tuple[str, ...] = ()):
        super().__init__(message)
        self.cells = tuple(cells)


@dataclass(frozen=True)
class Violation:
    """One invariant breach found by a validation pass.

    Violations are data, not exceptions: a validation pass returns all of
    them instead of stopping at the first problem.
    """

    code: str
    message: str
    subjects: tuple[str, ...] = ()

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


class ValidationError(S2DocError):
    """Raised when untrusted input fails the full validation pass."""

    def __init__(self, violations: list[Violation]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations) or "validation failed")


class ConversionWarning(UserWarning):
    """Signals information loss during a format conversion."""
