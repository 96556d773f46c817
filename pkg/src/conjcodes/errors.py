"""Exception types shared across the package."""


class BudgetExceededError(RuntimeError):
    """An enumeration would exceed the configured budget."""


class ConfigError(ValueError):
    """A run configuration or bundle is malformed or inconsistent."""


class VerificationError(AssertionError):
    """A constructed object fails one of its defining identities."""
