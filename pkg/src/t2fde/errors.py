"""Exception types shared across the package."""


class FuzzyError(Exception):
    """Base class for all package errors."""


class NoHukuharaDifference(FuzzyError):
    """Raised when ``a = b + w`` has no solution ``w`` of the required kind."""


class GridMismatch(FuzzyError):
    """Raised when a binary operation receives operands on different grids."""


class DegenerateMismatch(FuzzyError):
    """Raised when the two planes at beta = 1 do not coincide."""


class OutOfSupport(FuzzyError):
    """Raised when a point lies outside the support of a type-2 number."""


class NotDifferentiableInForm(FuzzyError):
    """Raised when a derivative candidate is not a valid fuzzy number."""


class HypothesisViolated(FuzzyError):
    """Raised when a theorem check is run on inputs outside its hypotheses."""


class IntegrationFailure(FuzzyError):
    """Raised when the ODE state becomes non-finite."""


class UnsupportedSpectrum(FuzzyError):
    """Raised when the cut system matrix is not diagonalizable over the reals."""


class SpecParseError(FuzzyError):
    """Raised for malformed problem-spec files; carries a source position."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
