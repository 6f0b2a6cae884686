# Polynomial arithmetic, calculus and map tests
from fractions import Fraction

import pytest
from hypothesis import given

from app.algebra.interval import Box, Interval
from app.algebra.poly import PolyMap, Polynomial, det, jacobian, jacobian_det, x, y, z
from app.core.exceptions import ArityError
from tests.strategies import planar_polys, points, rationals, small_planar_polys, unit_fractions, widths


class TestRingOperations:
    """Exact arithmetic on sparse polynomials."""

    @pytest.mark.unit
    def test_difference_of_squares(self, X, Y):
        """(x + y)(x - y) expands to x^2 - y^2."""
        assert (X + Y) * (X - Y) == X**2 - Y**2

    @pytest.mark.unit
    def test_cancellation_gives_zero(self, X):
        """Cancelling terms leaves the zero polynomial."""
        p = (X + 1) - (X + 1)
        assert p.is_zero()
        assert p.total_degree() == -1
        assert str(p) == "0"

    @pytest.mark.unit
    def test_rational_coefficients_stay_exact(self, X):
        """Coefficients are reduced fractions."""
        p = X / 3 + X / 6
        assert p.coefficient((1, 0, 0)) == Fraction(1, 2)

    @pytest.mark.unit
    def test_pow_rejects_negative_exponent(self, X):
        """Only natural exponents are allowed."""
        with pytest.raises(ArityError):
            X ** -1

    @pytest.mark.unit
    def test_pow_zero_is_one(self, X, Y):
        """p^0 is the constant 1."""
        assert (X + Y) ** 0 == 1

    @pytest.mark.unit
    def test_equality_ignores_declared_variables(self, X):
        """Variable metadata does not affect equality or hashing."""
        widened = X.with_vars(("x", "y", "z"))
        assert widened == X
        assert hash(widened) == hash(X)
        assert widened.vars == ("x", "y", "z")

    @pytest.mark.property
    @given(planar_polys, planar_polys, planar_polys)
    def test_ring_axioms(self, p, q, r):
        """Associativity, commutativity and distributivity."""
        assert (p + q) + r == p + (q + r)
        assert p * q == q * p
        assert p * (q + r) == p * q + p * r

    @pytest.mark.property
    @given(planar_polys, planar_polys, points)
    def test_evaluation_is_a_homomorphism(self, p, q, point):
        """Evaluating a product is the product of the values."""
        assert (p * q).eval_exact(point) == p.eval_exact(point) * q.eval_exact(point)


class TestDegrees:
    """Total and partial degrees."""

    @pytest.mark.unit
    def test_degrees(self, X, Y):
        """x^3 y + y^2 has total degree 4."""
        p = X**3 * Y + Y**2
        assert p.total_degree() == 4
        assert p.degree("x") == 3
        assert p.degree("y") == 2

    @pytest.mark.unit
    def test_leading_term_is_graded_lex(self, X, Y):
        """Graded-lex with x > y picks x^2 over x*y and y^3."""
        p = X * Y + X**2 + Y**3 - 7
        assert p.leading_term() == ((0, 3, 0), Fraction(1))
        assert (X * Y + X**2).leading_term() == ((2, 0, 0), Fraction(1))

    @pytest.mark.unit
    def test_coefficient_in_variable(self, X, Y):
        """Coefficients with respect to y are polynomials in x."""
        p = X * Y**2 + 3 * Y**2 + X
        assert p.coeff_in("y", 2) == X + 3
        assert p.leading_coeff_in("y") == X + 3
        assert p.coeff_in("y", 0) == X


class TestCalculus:
    """Partial derivatives and substitution."""

    @pytest.mark.unit
    def test_partials(self, X, Y):
        """d/dx and d/dy of x^2 y + y^3."""
        p = X**2 * Y + Y**3
        assert p.partial("x") == 2 * X * Y
        assert p.partial("y") == X**2 + 3 * Y**2

    @pytest.mark.property
    @given(planar_polys, planar_polys)
    def test_product_rule(self, p, q):
        """d(pq) = p dq + q dp."""
        assert (p * q).partial("x") == p * q.partial("x") + q * p.partial("x")

    @pytest.mark.property
    @given(planar_polys, planar_polys, planar_polys, points)
    def test_compose_commutes_with_eval(self, p, a, b, point):
        """p(a, b) evaluated at a point equals p at (a(point), b(point))."""
        composed = p.compose([a, b])
        assert composed.with_vars(("x", "y")).eval_exact(point) == p.eval_exact((a.eval_exact(point), b.eval_exact(point)))

    @pytest.mark.unit
    def test_compose_arity(self, X, Y):
        """Substitution list must match the declared variables."""
        with pytest.raises(ArityError):
            (X + Y).compose([X])

    @pytest.mark.unit
    def test_specialize(self, X, Y):
        """Fixing x = 2 in x*y - 1 leaves 2y - 1."""
        assert (X * Y - 1).specialize("x", 2) == 2 * Y - 1

    @pytest.mark.unit
    def test_eval_arity(self, X, Y):
        """A point must have one coordinate per declared variable."""
        with pytest.raises(ArityError):
            (X + Y).eval_exact((1,))

    @pytest.mark.property
    @given(planar_polys, rationals, rationals)
    def test_interval_evaluation_encloses(self, p, a, b):
        """Interval evaluation on a point box contains the exact value."""
        value = p.eval_exact((a, b))
        assert p.eval_interval(Box.from_point((a, b))).contains(value)

    @pytest.mark.property
    @given(planar_polys, points, widths, widths, unit_fractions, unit_fractions)
    def test_interval_evaluation_encloses_on_wide_boxes(self, p, corner, w, h, s, t):
        """Any point of a box with positive width maps into the interval value."""
        (a, b) = corner
        box = Box((Interval(a, a + w), Interval(b, b + h)))
        assert p.eval_interval(box).contains(p.eval_exact((a + s * w, b + t * h)))


class TestMaps:
    """PolyMap construction, Jacobians and composition."""

    @pytest.mark.unit
    def test_map_needs_two_or_three_components(self, X):
        """Arity is checked at construction."""
        with pytest.raises(ArityError):
            PolyMap("bad", (X,))

    @pytest.mark.unit
    def test_determinant_of_three_by_three(self, X):
        """Cofactor expansion on a triangular matrix."""
        one = Polynomial.constant(1)
        zero = Polynomial.zero()
        m = [[X, one, one], [zero, X, one], [zero, zero, 2 * one]]
        assert det(m) == 2 * X**2

    @pytest.mark.unit
    def test_det_rejects_non_square(self, X):
        with pytest.raises(ArityError):
            det([[X, X]])

    @pytest.mark.unit
    def test_identity_compose(self, F):
        """Composing with the identity is a no-op."""
        assert F.compose(PolyMap.identity(2)).components == F.components

    @pytest.mark.unit
    def test_jacobian_of_F_at_origin(self, F, origin):
        """J(F)(0,0) = [[1, 1], [-3, -1]] with determinant 2."""
        rows = [[entry.eval_exact(origin) for entry in row] for row in jacobian(F)]
        assert rows == [[1, 1], [-3, -1]]
        assert jacobian_det(F).eval_exact(origin) == 2

    @pytest.mark.unit
    def test_three_dimensional_identity(self):
        """det(D id) = 1 in three variables."""
        assert jacobian_det(PolyMap.identity(3)) == 1

    @pytest.mark.property
    @given(small_planar_polys, small_planar_polys, small_planar_polys, small_planar_polys)
    def test_chain_rule_for_determinants(self, a1, a2, b1, b2):
        """det D(A o B) = det(DA)(B) * det(DB)."""
        A, B = PolyMap("A", (a1, a2)), PolyMap("B", (b1, b2))
        outer_det = jacobian_det(A).with_vars(("x", "y")).compose([b1, b2])
        assert jacobian_det(A.compose(B)) == outer_det * jacobian_det(B)

    @pytest.mark.unit
    def test_z_helper(self):
        assert z().vars == ("z",)
