"""Exception types shared across the package."""

from __future__ import annotations


class SymFitchError(Exception):
    """Base class for all package errors."""


class ValidationError(SymFitchError, ValueError):
    """An input object violates one or more structural invariants."""

    def __init__(self, message: str, violations: tuple[str, ...] = ()):
        super().__init__(message)
        self.violations = tuple(violations) or (message,)


class PreconditionError(SymFitchError, ValueError):
    """An operation was called on an input outside its domain."""


class NotFitchError(SymFitchError, ValueError):
    """Raised by operations that require a Fitch map but got something else.

    ``witness`` carries the evidence (a K1+K2 triple, two colors, ...).
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class ResourceLimitError(SymFitchError, RuntimeError):
    """The exact search exceeded its leaf cap or time budget."""
