"""
dtanma: Common Exceptions
"""

from typing import Optional


class DtaNmaError(Exception):
    """
    Base dtanma Error
    """


class DatasetError(DtaNmaError):
    """
    Generic Dataset Error
    """


class DatasetParseError(DatasetError):
    """
    A row of the input file could not be parsed
    """

    def __init__(self, message: str, line_number: Optional[int] = None) -> None:
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class DatasetValidationError(DatasetError):
    """
    Parsed records break a dataset invariant
    """


class DomainError(DtaNmaError, ValueError):
    """
    Argument outside the domain of a mathematical operation
    """


class SamplerError(DtaNmaError):
    """
    Generic Sampler Error
    """


class SamplerInitializationError(SamplerError):
    """
    No finite starting point could be found
    """


class DiagnosticError(SamplerError):
    """
    Too few draws to compute convergence diagnostics
    """


class ConfigurationError(DtaNmaError):
    """
    Mutually inconsistent run configuration
    """


class NonFiniteDensityError(SamplerError):
    """
    The log density or its gradient is not finite at a candidate point
    """
