"""Exception types shared across the package."""


class TautError(Exception):
    pass


class ConfigError(TautError, ValueError):
    """Invalid input or configuration (CLI exit code 2)."""


class FiberError(ConfigError):
    """A character is not constant on a fiber class of the orbit map."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class RepresentativeError(ConfigError):
    """A coset-representative dependent value was detected."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class BudgetError(TautError):
    """An enumeration would exceed the configured budget (CLI exit code 3)."""
