"""
Exception hierarchy.

Library code raises these; the claim suite turns them into FAIL verdicts with
diagnostics and the CLI maps them to exit code 2.
"""
from enum import Enum


class PinchukError(Exception):
    """Base class for every error raised by the package."""


class ParseErrorKind(str, Enum):
    SYNTAX = "SyntaxError"
    NON_NATURAL_EXPONENT = "NonNaturalExponent"
    UNKNOWN_VARIABLE = "UnknownVariable"


class ParseError(PinchukError):
    """Malformed polynomial, rational, point or grid text."""

    def __init__(self, position: int, kind: ParseErrorKind, message: str) -> None:
        self.position = position
        self.kind = kind
        self.message = message
        super().__init__(f"{kind.value} at offset {position}: {message}")


class ArityError(PinchukError):
    """Argument count does not match the number of variables or components."""


class UnknownMapError(PinchukError):
    """Map name not in the registry."""


class ZeroPolynomialError(PinchukError):
    """Operation undefined for the zero polynomial."""


class NotSquareFreeError(PinchukError):
    """A Sturm chain was requested for a polynomial with repeated roots."""


class NonZeroDimensionalError(PinchukError):
    """The system has a common factor, so infinitely many complex solutions."""


class CertificationStalledError(PinchukError):
    """Refinement hit its depth limit before a box could be certified."""


class DegenerateCenterError(PinchukError):
    """Every center tried gave a positive-dimensional critical system."""


class MissingCertificateError(PinchukError):
    """A construction needs a non-vanishing Jacobian certificate it was not given."""


class WitnessNotFoundError(PinchukError):
    """The witness grid was exhausted without a fiber of size two or more."""


class IneligibleMapError(PinchukError):
    """Exact mode requested for a map whose components are too large."""


class DivisionByZeroFunctionError(PinchukError):
    """Division by the zero rational function."""


class ReplayMismatchError(PinchukError):
    """A replayed certificate did not reproduce its recorded verdict."""
