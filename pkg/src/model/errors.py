"""
src/model/errors.py - Error Types
Every failure the simulator reports is one of these
"""

from typing import Optional


class EitBecError(Exception):
    """Base class of all simulator errors"""


class ConfigValidationError(EitBecError, ValueError):
    """
    Invalid configuration value.

    `key` is the dotted config key ("grid.n"), `line` the 1-based line of the
    config file it came from when the value was read from a file.
    """

    def __init__(self, message: str, key: Optional[str] = None,
                 line: Optional[int] = None, source: Optional[str] = None):
        self.message = message
        self.key = key
        self.line = line
        self.source = source
        super().__init__(self._render())

    def _render(self) -> str:
        location = ""
        if self.source is not None:
            location = f"{self.source}:"
        if self.line is not None:
            location += f"{self.line}: "
        elif location:
            location += " "
        prefix = f"{self.key}: " if self.key else ""
        return f"{location}{prefix}{self.message}"

    def anchored(self, line: Optional[int], source: Optional[str] = None) -> "ConfigValidationError":
        """Copy of this error pointing at a line of a config file"""
        return type(self)(self.message, key=self.key, line=line, source=source)


class StabilityBoundError(ConfigValidationError):
    """The time step violates a solver's declared stability bound"""


class DomainError(EitBecError, ValueError):
    """Argument outside the domain of an operation (e.g. t < 0)"""


class GridMismatchError(EitBecError):
    """Fields or snapshot series that must be co-registered are not"""


class NumericalFailureError(EitBecError):
    """NaN or Inf appeared in an evolved field"""

    def __init__(self, message: str, step: Optional[int] = None, tag: Optional[str] = None):
        self.step = step
        self.tag = tag
        super().__init__(message)


class StoppedLightError(EitBecError):
    """The reduced tier was asked to step with G below its threshold"""


class UnsupportedOperationError(EitBecError):
    """The requested operation is outside what a tier supports"""


class FitQualityError(EitBecError):
    """A diagnostic fit is degenerate or its residual is too large"""


class GridTooSmallError(EitBecError):
    """Too much of the pulse reached the edge of the periodic grid"""
