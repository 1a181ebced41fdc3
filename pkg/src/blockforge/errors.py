"""Shared exception types."""

from __future__ import annotations


class BlockforgeError(Exception):
    """Base class for all toolkit errors."""


class BudgetExceededError(BlockforgeError):
    """An enumeration would exceed a configured budget.

    Carries the budget name so the CLI can report which limit was hit and
    callers can decide to fall back to sampled verification.
    """

    def __init__(self, budget: str, limit: int, required: int, hint: str = ""):
        self.budget = budget
        self.limit = limit
        self.required = required
        msg = f"budget '{budget}' exceeded: need {required}, limit {limit}"
        if hint:
            msg += f" ({hint})"
        super().__init__(msg)


class DualityMismatchError(BlockforgeError):
    """The blocking-set verifier and the s-minimality checker disagreed.

    The two are provably equivalent, so a mismatch is a fatal consistency
    error, never a property of the input.
    """


class CertificateError(BlockforgeError):
    """A rank certificate could not be assembled (missing witness or a
    non-triangular elimination order)."""
