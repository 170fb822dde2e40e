"""Exception hierarchy shared across the package.

Two branches matter to the CLI: ConfigError maps to exit code 2,
DataError to exit code 3.
"""


class TirtoneError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(TirtoneError):
    """Invalid configuration value or config file."""


class DataError(TirtoneError):
    """Bad or missing input data."""


class MissingFile(DataError):
    pass


class UnsupportedFormat(DataError):
    pass


class IoFailure(DataError):
    pass


class NonPositiveSigma(ConfigError):
    pass


class FrameTooSmall(DataError):
    pass


class InvalidPercentiles(ConfigError):
    pass


class EmptyReference(DataError):
    pass


class DimensionMismatch(DataError):
    pass


class SequenceMismatch(DataError):
    pass


class TooFewFrames(DataError):
    pass


class EmptyInput(DataError):
    pass
