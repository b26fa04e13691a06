"""Exception types shared across the library."""


class ParablError(Exception):
    """Base class for every error raised by this package."""


class ShapeError(ParablError, ValueError):
    """Operand shapes or buffer lengths do not line up."""


class KindError(ParablError, TypeError):
    """Element kinds are incompatible with the requested operation."""


class BoundsError(ParablError, IndexError):
    """Index outside the valid range of a container."""


class ParameterError(ParablError, ValueError):
    """Scalar parameter outside its documented domain."""


class ConfigError(ParablError, ValueError):
    """Invalid execution configuration."""


class CaptureError(ParablError, RuntimeError):
    """A kernel did something that cannot be recorded into a trace."""


class ReplayError(ParablError, RuntimeError):
    """Replay inputs do not match the recorded parameter slots."""


class ParseError(ParablError, ValueError):
    """Rejected textual input; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class FormatError(ParablError, ValueError):
    """Structurally invalid sparse matrix data."""


class BreakdownError(ParablError, ArithmeticError):
    """Conjugate gradient hit a direction of non-positive curvature."""


class SingularError(ParablError, ArithmeticError):
    """Dense solve found no usable pivot."""
