"""Exception types shared by every module."""

from __future__ import annotations


class GrundyError(Exception):
    """Base class for errors raised by this package."""


class InvalidArgument(GrundyError, ValueError):
    """An input violates a documented precondition."""


class BudgetExceeded(GrundyError):
    """A computation hit its configured size or state budget.

    ``upper_bound`` is set by solvers that scan k downward: every k above it
    has already been refuted, so the true value is at most ``upper_bound``.
    """

    def __init__(self, message: str, upper_bound: int | None = None):
        super().__init__(message)
        self.upper_bound = upper_bound
