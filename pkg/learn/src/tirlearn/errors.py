"""Error taxonomy.

ConfigError maps to CLI exit code 2, DataError subclasses to 3.
EmptyHistory flags a call-order bug (loss asked for a temporal
reference before any output was recorded) and is not CLI-mapped.
"""


class LearnError(Exception):
    """Base class for all tirlearn errors."""


class ConfigError(LearnError):
    """Invalid training configuration."""


class DataError(LearnError):
    """Unusable input data."""


class InvalidShape(DataError):
    """Input dimensions incompatible with the network's level count."""


class ShapeMismatch(DataError):
    """Prediction and target shapes differ."""


class BadManifest(DataError):
    """Pairs manifest missing, malformed, or pointing at absent files."""


class EmptyHistory(LearnError):
    """Temporal loss evaluated with no recorded output means."""
