"""Shared exception types."""


class GuardError(Exception):
    """A resource guard (variable-count or enumeration limit) was exceeded."""


class InternalError(Exception):
    """An internal invariant of the solver was violated; indicates a bug."""
