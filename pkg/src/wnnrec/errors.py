"""Shared exception types."""


class FormatError(ValueError):
    """A serialized document or data file is malformed or mis-versioned."""


class NotFoundError(LookupError):
    """A referenced entity (agent, movie, memory pair) does not exist."""
