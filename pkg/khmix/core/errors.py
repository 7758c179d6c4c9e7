"""Exception hierarchy shared by every khmix service."""

from __future__ import annotations


class KhmixError(Exception):
    """Base class for all errors raised by khmix."""


class ParseError(KhmixError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(f"{where}{message}")


class DiagramError(KhmixError):
    """Invalid planar diagram data (dangling arc-ends, non-planar rotation data, ...)."""


class MoveError(KhmixError):
    def __init__(self, message: str, frame: int | None = None, move: str | None = None):
        self.frame = frame
        self.move = move
        prefix = f"frame {frame}: " if frame is not None else ""
        suffix = f" [{move}]" if move else ""
        super().__init__(f"{prefix}{message}{suffix}")


class TheoryError(KhmixError):
    """Theory or coefficient field mismatch."""


class GradingError(KhmixError):
    """Non-homogeneous data or a flavor mismatch."""


class NotTorsionError(KhmixError):
    """A class that was required to be U-torsion is not."""


class CutError(KhmixError):
    """The cut marker of a movie is missing, repeated or not admissible."""


class WindowError(KhmixError):
    """An internal pole-depth bound was exceeded."""


class SuiteError(KhmixError):
    """Unknown verification suite."""
