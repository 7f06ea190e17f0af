"""Shared exception types."""


class BudgetExceeded(RuntimeError):
    """An enumeration or search exceeded its configured budget."""


class DimensionTooLarge(ValueError):
    """Brute-force facet enumeration is limited to small ambient dimension."""
