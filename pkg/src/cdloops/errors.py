"""Exception types shared across the package."""


class BudgetExceeded(RuntimeError):
    """An enumeration (or search) would exceed the configured element budget."""

    def __init__(self, message, required=None, budget=None):
        super().__init__(message)
        self.required = required
        self.budget = budget


class TableFormatError(ValueError):
    """A loop-table file (or raw table) failed validation."""


class DecompositionError(RuntimeError):
    """A table could not be decomposed as a central product of CD loops."""
