"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain of an operation (invalid point, bad parameter)."""


class NumericError(ArithmeticError):
    """A numerical routine failed (eigensolver, bisection, inconsistent rounding)."""


class ConfigError(ValueError):
    """A solver or CLI configuration is inconsistent."""
