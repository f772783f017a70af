"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An input lies outside the domain of an operation."""


class InvalidSeriesError(ValueError):
    """A rational series whose coefficients are not integral (non-unit constant term)."""


class InternalConsistencyError(RuntimeError):
    """A cross-check failed. This points at a bug, never at bad input."""


class DecisionTooLargeError(RuntimeError):
    """The exact decision would need more residues or entries than the configured limits."""
