"""Exception types shared across the package."""


class CfequivError(Exception):
    """Base class for all package errors."""


class InputDomainError(CfequivError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class InsufficientSampleError(CfequivError, ValueError):
    """Too few observations for the requested statistic."""


class ShapeError(CfequivError, ValueError):
    """Sample shapes are inconsistent with each other or with the hypothesis."""


class ConfigError(CfequivError, ValueError):
    """Invalid test or experiment configuration."""


class DataError(CfequivError, ValueError):
    """Malformed input data (CSV parsing, non-finite cells, ragged rows)."""


class NumericalError(CfequivError, RuntimeError):
    """A numerical routine failed to converge to the requested accuracy."""


class UnsupportedKernelError(CfequivError, ValueError):
    """The requested kernel has no implementation for this operation."""
