"""Domain exceptions shared by the services, the HTTP layer and the CLI.

Every error carries a stable ``code`` used in machine-readable error payloads.
Subclasses also derive from the closest builtin so callers can catch
``ValueError`` / ``IndexError`` without importing this module.
"""


class ChangePointError(Exception):
    """Base exception for change point inference errors."""

    code = "change_point_error"


class RangeError(ChangePointError, IndexError):
    """Raised when a window falls outside the series."""

    code = "range_error"


class InvalidScaleError(ChangePointError, ValueError):
    """Raised when a window is too narrow to split into p+2 chunks."""

    code = "invalid_scale"


class UnsupportedDegreeError(ChangePointError, ValueError):
    """Raised for a polynomial degree outside the supported range."""

    code = "unsupported_degree"


class ParameterError(ChangePointError, ValueError):
    """Raised for invalid tuning parameters."""

    code = "parameter_error"


class EmptyGridError(ParameterError):
    """Raised when the scale set would be empty (n < 2W)."""

    code = "empty_scale_set"


class SmallSampleError(ParameterError):
    """Raised when the Gaussian threshold is requested for n < 50."""

    code = "small_sample"


class DomainError(ChangePointError, ValueError):
    """Raised when a function is evaluated outside its domain."""

    code = "domain_error"


class SeriesTooShortError(ChangePointError, ValueError):
    """Raised when a series is too short for the requested estimator."""

    code = "series_too_short"


class DegenerateScaleError(ChangePointError, ValueError):
    """Raised when the estimated noise scale is exactly zero."""

    code = "degenerate_scale"


class SignalSpecError(ChangePointError, ValueError):
    """Raised for a malformed test-signal specification."""

    code = "signal_spec_error"


class IngestError(ChangePointError, ValueError):
    """Raised when a CSV file cannot be turned into a series."""

    code = "ingest_error"

    def __init__(self, message: str, line: int | None = None) -> None:
        """Initialize ingest error.

        Args:
            message: Human readable description
            line: 1-based line number of the offending row, if known
        """
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
