class RMTError(Exception):
    """Base class of every error raised by the toolkit."""


class ConfigurationError(RMTError, ValueError):
    """Unsupported space/density pair, invalid parameter or usage error."""


class DomainError(RMTError, ValueError):
    """Input lies outside the domain of the requested operation."""


class DomainMismatchError(RMTError, TypeError):
    """Two objects that must share a domain (weights, operators, spaces) do not."""


class AccuracyError(RMTError, ArithmeticError):
    """
    A numerical estimate could not reach the requested tolerance.
    Params:
        message: Human readable description
        achieved: Error estimate actually reached
        tolerance: Tolerance that was requested
    """

    def __init__(self, message, achieved=None, tolerance=None):
        super().__init__(message)
        self.achieved = achieved
        self.tolerance = tolerance

    def __str__(self):
        base = super().__str__()
        if self.achieved is None:
            return base
        return f"{base} (achieved {self.achieved:.3e}, tolerance {self.tolerance:.3e})"


class NumericError(RMTError, FloatingPointError):
    """Non-finite values or a broken structural identity in a matrix."""


class DataError(RMTError, ValueError):
    """Empty, malformed or out-of-model sample data."""


class DegenerateSampleError(DataError):
    """A sample hits a measure-zero degeneracy (vanishing principal minor)."""


class ResourceError(RMTError, RuntimeError):
    """A configured size cap was exceeded."""
