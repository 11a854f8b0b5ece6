"""Shared exception types."""


class ResourceBound(RuntimeError):
    """A configured resource limit (rewrite budget, state bound, configuration
    bound) was exceeded."""


class UnguardedRecursion(ValueError):
    """A recursive specification could not be unfolded to a guarded head."""
