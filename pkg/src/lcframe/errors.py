"""Common exception hierarchy for lcframe."""


class LcframeError(Exception):
    """Base class for all errors raised by this package."""
