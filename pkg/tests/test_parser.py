# Text grammar tests
from fractions import Fraction

import pytest
from hypothesis import given

from app.algebra.parser import format_rational, parse_map_def, parse_point, parse_poly, parse_rational, print_canonical
from app.core.exceptions import ParseError, ParseErrorKind
from app.services.maps import bf_p
from tests.strategies import planar_polys


class TestParsePoly:
    """Polynomial parsing."""

    @pytest.mark.unit
    def test_three_terms(self, X, Y):
        p = parse_poly("4*x^6*y^3 + x + y")
        assert p == 4 * X**6 * Y**3 + X + Y
        assert len(p.terms) == 3

    @pytest.mark.unit
    def test_expands_parentheses(self, X, Y):
        """The second component of psi parses to its expanded form."""
        assert parse_poly("(x*y+1)^2 + x^2") == X**2 * Y**2 + 2 * X * Y + X**2 + 1

    @pytest.mark.unit
    def test_unary_minus_negates_leading_term(self, X, Y):
        assert parse_poly("-x^2 + y") == -(X**2) + Y

    @pytest.mark.unit
    def test_whitespace_is_insignificant(self):
        assert parse_poly(" x  *  y ") == parse_poly("x*y")

    @pytest.mark.unit
    def test_rational_coefficients(self, X):
        assert parse_poly("1/2*x + 3/4") == X / 2 + Fraction(3, 4)

    @pytest.mark.unit
    def test_implicit_multiplication_is_rejected(self):
        """"2x" fails at offset 1."""
        with pytest.raises(ParseError) as info:
            parse_poly("2x")
        assert info.value.kind is ParseErrorKind.SYNTAX
        assert info.value.position == 1

    @pytest.mark.unit
    @pytest.mark.parametrize("text", ["x^-1", "x^(1/2)", "x^1/2"])
    def test_non_natural_exponents(self, text):
        with pytest.raises(ParseError) as info:
            parse_poly(text)
        assert info.value.kind is ParseErrorKind.NON_NATURAL_EXPONENT

    @pytest.mark.unit
    def test_unknown_variable(self):
        with pytest.raises(ParseError) as info:
            parse_poly("x + w")
        assert info.value.kind is ParseErrorKind.UNKNOWN_VARIABLE
        assert info.value.position == 4

    @pytest.mark.unit
    @pytest.mark.parametrize("text", ["1.5*x", "x +", "(x + y", "x ** 2", "1/0*x"])
    def test_syntax_errors(self, text):
        with pytest.raises(ParseError) as info:
            parse_poly(text)
        assert info.value.kind is ParseErrorKind.SYNTAX


class TestRationalsAndPoints:
    """Rational and point syntax."""

    @pytest.mark.unit
    def test_reduces(self):
        assert parse_rational("2/4") == Fraction(1, 2)

    @pytest.mark.unit
    def test_negative(self):
        assert parse_rational("-3/6") == Fraction(-1, 2)

    @pytest.mark.unit
    def test_zero_denominator(self):
        with pytest.raises(ParseError):
            parse_rational("1/0")

    @pytest.mark.unit
    def test_point(self):
        assert parse_point("1,0") == (1, 0)
        assert parse_point("1/2, -3", 2) == (Fraction(1, 2), -3)

    @pytest.mark.unit
    def test_point_dimension_is_checked(self):
        with pytest.raises(ParseError):
            parse_point("1,2,3", 2)

    @pytest.mark.unit
    def test_format_rational_always_has_denominator(self):
        assert format_rational(Fraction(3)) == "3/1"
        assert format_rational(Fraction(-2, 4)) == "-1/2"


class TestPrintCanonical:
    """Canonical printing."""

    @pytest.mark.unit
    def test_zero(self, X):
        assert print_canonical(X - X) == "0"

    @pytest.mark.unit
    def test_difference_of_squares(self, X, Y):
        assert print_canonical(X**2 - Y**2) == "x^2 - y^2"

    @pytest.mark.unit
    def test_leading_negative_and_constants(self, X, Y):
        assert print_canonical(-(X**2) + 2 * X * Y - 1) == "-x^2 + 2*x*y - 1"

    @pytest.mark.unit
    def test_fractional_coefficient(self, X):
        assert print_canonical(X / 2 - Fraction(1, 3)) == "1/2*x - 1/3"

    @pytest.mark.unit
    def test_round_trip_of_p(self):
        p = bf_p()
        assert parse_poly(print_canonical(p)) == p

    @pytest.mark.property
    @given(planar_polys)
    def test_round_trip(self, p):
        assert parse_poly(print_canonical(p)) == p

    @pytest.mark.property
    @given(planar_polys, planar_polys)
    def test_printing_is_injective(self, p, q):
        assert (print_canonical(p) == print_canonical(q)) == (p == q)


class TestMapDefinitions:
    """"P1;P2" map syntax."""

    @pytest.mark.unit
    def test_planar_map(self, X, Y):
        m = parse_map_def("x*y - 1; y^2 - x")
        assert m.components == (X * Y - 1, Y**2 - X)
        assert m.domain_vars == ("x", "y")

    @pytest.mark.unit
    def test_z_is_unknown_in_planar_maps(self):
        with pytest.raises(ParseError) as info:
            parse_map_def("x; z")
        assert info.value.kind is ParseErrorKind.UNKNOWN_VARIABLE

    @pytest.mark.unit
    def test_component_count(self):
        with pytest.raises(ParseError):
            parse_map_def("x")
