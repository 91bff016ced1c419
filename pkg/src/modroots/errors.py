"""Shared exception types."""


class CapacityError(Exception):
    """Requested computation exceeds a hard size cap (word size, sieve range, table cap)."""


class BudgetExceededError(Exception):
    """Requested computation exceeds the configured work budget."""


class DegenerateError(Exception):
    """Degenerate input for which the requested quantity is undefined."""


class ConfigError(Exception):
    """Malformed sweep configuration (unknown check, bad grid key, bad value)."""


class InfeasibleCellError(Exception):
    """A grid cell whose parameter combination violates the check's precondition
    (for example N > q in a product grid); recorded as a skipped row."""
