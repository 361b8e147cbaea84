"""Exception hierarchy shared across the package.

Exit-code mapping used by the CLI: validation errors -> 2, convergence
errors -> 3, size-cap errors -> 4, I/O errors -> 5.
"""

from __future__ import annotations


class BanachLabError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class ValidationError(BanachLabError):
    """An argument violates a documented precondition."""

    exit_code = 2


class ConvergenceError(BanachLabError):
    """An iterative solver exhausted its budget before certifying.

    Carries the best two-sided bracket found so the caller can still use
    the partial result.
    """

    exit_code = 3

    def __init__(self, message: str, lower: float, upper: float):
        super().__init__(f"{message} (bracket [{lower:.12g}, {upper:.12g}])")
        self.lower = lower
        self.upper = upper


class SizeCapError(BanachLabError):
    """Input exceeds a configured size cap."""

    exit_code = 4

    def __init__(self, message: str, needed: int, cap: int):
        super().__init__(f"{message}: need {needed}, cap is {cap}")
        self.needed = needed
        self.cap = cap


class UnsupportedSpaceError(ValidationError):
    """Operation not defined for this space descriptor (e.g. non-lattice)."""
