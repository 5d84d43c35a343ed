"""Exception types shared across the package."""

from __future__ import annotations


class MatrixFormatError(ValueError):
    """Raised when matrix text input cannot be parsed."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SizeLimitError(ValueError):
    """Raised when an exact computation would exceed its documented size limit."""
