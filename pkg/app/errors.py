"""Exceptions shared by the services, the CLI and the HTTP routers.

Each class carries the process exit code the CLI maps it to."""

from typing import Optional


class HColorError(Exception):
    exit_code = 2


class FormatError(HColorError):
    """Malformed edge-list, lists file, DIMACS, DOT or metadata text."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class UsageError(HColorError):
    pass


class PreconditionError(HColorError):
    exit_code = 3


class DegreeBoundError(PreconditionError):
    pass


class OracleLimitError(PreconditionError):
    pass


class ColoringError(HColorError):
    pass


class AssignmentError(HColorError):
    pass


class ListsError(HColorError):
    """Color lists that do not fit the graph or the target."""
