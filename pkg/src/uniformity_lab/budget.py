"""Scalar-operation budget guard for enumeration-heavy jobs.

Every exhaustive operation estimates its scalar-operation count up front and
refuses to run when the estimate exceeds the budget, instead of silently
grinding for hours.  The default budget is 10^10 scalar operations (tens of
seconds on one core); it can be overridden per call, or globally through the
UNIFORMITY_LAB_BUDGET environment variable.
"""

from __future__ import annotations

import os

DEFAULT_BUDGET = 10**10

ENV_VAR = "UNIFORMITY_LAB_BUDGET"


class BudgetExceededError(RuntimeError):
    """Raised when a job's estimated operation count exceeds the budget."""

    def __init__(self, required: int, budget: int, what: str = ""):
        self.required = int(required)
        self.budget = int(budget)
        self.what = what
        label = f" for {what}" if what else ""
        super().__init__(
            f"operation count {self.required}{label} exceeds budget {self.budget}"
        )


def resolve_budget(budget: int | None = None) -> int:
    """Explicit argument wins, then the environment variable, then the default."""
    if budget is not None:
        return int(budget)
    env = os.environ.get(ENV_VAR)
    if env:
        return int(env)
    return DEFAULT_BUDGET


def check_budget(op_count: int, budget: int | None = None, what: str = "") -> int:
    """Return the resolved budget, raising BudgetExceededError if over."""
    allowed = resolve_budget(budget)
    if op_count > allowed:
        raise BudgetExceededError(op_count, allowed, what)
    return allowed
