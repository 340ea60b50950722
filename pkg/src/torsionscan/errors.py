"""Exception hierarchy shared by the library and the CLI."""


class TorsionScanError(Exception):
    """Base class for all errors raised by torsionscan."""


class ArithmeticOverflowError(TorsionScanError, OverflowError):
    """An entry left the configured fixed-width integer range."""


class DimensionError(TorsionScanError, ValueError):
    """Input points do not span the ambient space."""


class ReflexivityError(TorsionScanError, ValueError):
    """A reflexive-only operation received a non-reflexive polytope."""


class UnsupportedDimensionError(TorsionScanError, ValueError):
    """The invariant is not defined (or not trusted) in this dimension."""


class SpecError(TorsionScanError, ValueError):
    """A vertex-relation description does not define a reflexive 4-polytope."""


class ParseError(TorsionScanError, ValueError):
    """Malformed vertex-matrix text."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
        self.reason = message


class InternalConsistencyError(TorsionScanError, AssertionError):
    """A result contradicts a theorem the computation relies on (a bug)."""
