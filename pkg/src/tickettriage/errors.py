"""Shared exception types."""


class ParameterError(ValueError):
    """An operation was called with out-of-contract arguments."""


class TrainingError(ValueError):
    """Model training could not proceed (empty corpus, degenerate classes...)."""


class ConsistencyError(RuntimeError):
    """Internal invariant violated (e.g. a head category without a resolution)."""
