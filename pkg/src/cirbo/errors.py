"""Shared exception types."""


class SingularModelError(RuntimeError):
    """Cholesky factorisation failed even at the maximum jitter level."""


class ConfigError(ValueError):
    """A config file could not be parsed or validated."""
