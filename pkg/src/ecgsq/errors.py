__all__ = ["CorruptStreamError"]


class CorruptStreamError(ValueError):
    """A compressed stream references state the receiver does not have."""
