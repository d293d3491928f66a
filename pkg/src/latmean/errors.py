"""Exception types shared across the toolkit."""


class LatmeanError(Exception):
    """Base class for all toolkit errors."""


class ConfigurationError(LatmeanError):
    """Unsupported or malformed field / suite configuration."""


class DomainError(LatmeanError):
    """Input outside the mathematical domain of an operation."""


class IntegrityError(LatmeanError):
    """A stored invariant failed its cross-check."""


class DegeneracyError(LatmeanError):
    """Rank-deficient input where independence is required."""


class ResourceLimitError(LatmeanError):
    """An enumeration or search exceeded its configured budget."""


class PreconditionError(LatmeanError):
    """An operation's stated hypothesis does not hold for the input."""
