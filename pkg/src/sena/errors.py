"""Exception types shared across the package."""


class SenaError(Exception):
    """Base class for errors raised by this package."""


class ParameterError(SenaError, ValueError):
    """An argument violates an operation's preconditions."""


class InsufficientDataError(SenaError, ValueError):
    """Too few usable samples to run a statistical test."""


class ConfigurationError(SenaError, RuntimeError):
    """A config or model file is missing, malformed, or inconsistent."""
