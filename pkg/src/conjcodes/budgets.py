"""Enumeration budgets.

Exhaustive enumerations (codeword spans, coset tables, type lists) are the
backbone of the exact checks in this package, and they are only safe at desk
scale.  Every enumeration call asks for permission here first and raises
instead of silently sampling.
"""

import os

from .errors import BudgetExceededError

DEFAULT_ENUMERATION_BUDGET = 1 << 24

# Hard cap on field sizes; log/antilog tables are built eagerly per field.
MAX_FIELD_ORDER = 1 << 16

ENV_BUDGET = "CONJ_BUDGET"


def enumeration_budget() -> int:
    """Current enumeration budget, overridable via the CONJ_BUDGET env var."""
    raw = os.environ.get(ENV_BUDGET)
    if raw is None:
        return DEFAULT_ENUMERATION_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise BudgetExceededError(f"{ENV_BUDGET} must be an integer, got {raw!r}") from exc
    if value <= 0:
        raise BudgetExceededError(f"{ENV_BUDGET} must be positive, got {value}")
    return value


def check_budget(count: int, what: str) -> None:
    """Raise BudgetExceededError if an enumeration of `count` items is too large."""
    budget = enumeration_budget()
    if count > budget:
        raise BudgetExceededError(
            f"{what} needs {count} items, over the budget of {budget}"
            f" (set {ENV_BUDGET} to raise it)"
        )
