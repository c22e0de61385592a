"""Shared exception types."""


class InternalConsistencyError(RuntimeError):
    """A self-check that should be impossible to fail has failed."""
