"""Exception hierarchy shared by every sockopt module.

Each class also derives from a built-in type, so callers can keep catching
``ValueError`` or ``RuntimeError`` where that reads better.
"""

from __future__ import annotations


class SockoptError(Exception):
    """Base class for all sockopt errors."""


class InvalidInputError(SockoptError, ValueError):
    """Bad arguments or configuration."""


class CatalogueParseError(InvalidInputError):
    """A catalogue file row could not be parsed; ``line`` is 1-based."""

    def __init__(self, message: str, *, path: str | None = None, line: int | None = None) -> None:
        self.path = path
        self.line = line
        location = ""
        if path is not None:
            location = f"{path}:{line}: " if line is not None else f"{path}: "
        elif line is not None:
            location = f"line {line}: "
        super().__init__(f"{location}{message}")


class DataError(SockoptError, ValueError):
    """Input data is present but unusable (empty trials file, no choice sets...)."""


class GuardExceededError(SockoptError, RuntimeError):
    """An exact solver refused an instance above its size guard."""


class RunCancelledError(SockoptError, RuntimeError):
    """A command was cancelled before it finished; outputs already written are marked partial."""


__all__ = [
    "CatalogueParseError",
    "DataError",
    "GuardExceededError",
    "InvalidInputError",
    "RunCancelledError",
    "SockoptError",
]
