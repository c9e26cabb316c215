"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class DecoplateError(Exception):
    exit_code = 1


class ConfigError(DecoplateError, ValueError):
    exit_code = 2


class DomainError(DecoplateError, ValueError):
    """A non-physical or out-of-domain value."""

    exit_code = 3


class DimensionError(DomainError):
    """Arithmetic or argument with the wrong dimension tag."""


class UnsupportedModelError(DomainError):
    pass


class GeometryError(DomainError):
    pass


class NumericError(DecoplateError, ArithmeticError):
    """Invariant violation or non-convergence."""

    exit_code = 4


class SizeError(DecoplateError):
    exit_code = 5
