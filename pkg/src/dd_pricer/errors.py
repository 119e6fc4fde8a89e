"""Exception hierarchy shared by all pricing modules.

Two families matter to callers: input problems (ValidationError and
subclasses) and numerical problems (NumericalError and subclasses). The CLI
maps the former to exit code 3 and the latter to exit code 4.
"""


class PricerError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(PricerError):
    """An input violates a domain invariant. Never silently clamped."""

    def __init__(self, field: str, message: str, value=None):
        self.field = field
        self.message = message
        self.value = value
        super().__init__(f"{field}: {message} (got {value!r})")


class AlreadyTriggered(ValidationError):
    """The drawdown has already reached the insured level (y >= k)."""


class DomainError(ValidationError):
    """Arguments are outside the domain of the requested formula."""


class ConfigError(ValidationError):
    """A simulation configuration invariant is violated."""


class InsufficientPaths(ValidationError):
    """Too few Monte Carlo paths for a meaningful estimate."""


class NumericalError(PricerError):
    """Base class for runtime numerical failures."""


class NoBracket(NumericalError):
    """Root finding was given an interval without a sign change."""


class NotConverged(NumericalError):
    """A series hit its term cap before meeting the tolerance."""

    def __init__(self, message: str, partial=None, terms_used=None):
        self.partial = partial
        self.terms_used = terms_used
        super().__init__(message)


class DegenerateDenominator(NumericalError):
    """A premium denominator is numerically indistinguishable from zero."""
