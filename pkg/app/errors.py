# app/errors.py
"""
Error hierarchy shared by the library, the CLI and the HTTP service.

Every error raised on purpose derives from CGEntropyError, so the front ends
can map the whole family onto exit codes / HTTP statuses in one place.
"""


class CGEntropyError(Exception):
    """Base class for all errors raised by this package"""


class DomainError(CGEntropyError, ValueError):
    """Input outside the mathematical domain of an operation"""


class ParseError(DomainError):
    """A half-integer string could not be parsed"""


class OutOfDomainError(DomainError):
    """Hahn parameters with alpha <= -1 or beta <= -1"""


class SingularParameterError(DomainError):
    """A lower Pochhammer symbol vanishes before the series terminates"""


class UnsupportedLabelError(DomainError):
    """A coupling label the Hahn representation cannot reach"""


class ConfigError(CGEntropyError):
    """Invalid settings or command options"""
