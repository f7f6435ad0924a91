"""Exception hierarchy shared across the package."""


class KappaCeilingError(Exception):
    """Base class for all domain errors raised by this package."""


class InsufficientData(KappaCeilingError):
    """Too few observations for the requested statistic."""


class DegenerateVariance(KappaCeilingError):
    """A variance (or variance-based denominator) is zero where a positive value is required."""


class ScaleViolation(KappaCeilingError):
    """A score is non-integer or outside the declared score scale."""


class SchemaError(KappaCeilingError):
    """An input file does not match the declared column schema."""


class ParseError(KappaCeilingError):
    """A cell could not be parsed as a number."""


class ConfigError(KappaCeilingError):
    """Invalid configuration value or flag combination."""
