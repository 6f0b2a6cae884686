# Resultants, bivariate solving and fibers
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from app.algebra import bridge
from app.algebra.poly import Polynomial
from app.core.exceptions import ArityError, IneligibleMapError, NonZeroDimensionalError
from app.services.maps import map_service
from app.solvers.newton import approximate_roots, polish
from app.solvers.systems import FiberMode, Multiplicity, fiber, resultant, shear_sequence, solve_bivariate, staged_fiber
from tests.strategies import points, rationals, small_planar_polys

_X, _Y = Polynomial.var("x"), Polynomial.var("y")


class TestResultant:
    """Elimination of y."""

    @pytest.mark.unit
    def test_hyperbola_and_parabola(self, X, Y):
        """Res_y(xy - 1, y^2 - x) = 1 - x^3 with f's rows first."""
        assert resultant(X * Y - 1, Y**2 - X, "y", cross_check=True) == 1 - X**3

    @pytest.mark.unit
    def test_sylvester_determinant_agrees(self, X, Y):
        f, g = X**2 * Y + Y - 3, Y**2 - X * Y + 2
        assert bridge.sylvester_det(f, g, "y") == resultant(f, g, "y")

    @pytest.mark.unit
    def test_vanishes_on_common_roots(self, X, Y):
        """Res_y(f, g)(x0) = 0 whenever f(x0, y0) = g(x0, y0) = 0."""
        f, g = X**2 + Y**2 - 5, X * Y - 2
        r = resultant(f, g, "y")
        for x0 in (1, 2, -1, -2):
            assert r.specialize("x", x0) == 0

    @pytest.mark.property
    @given(points, small_planar_polys, small_planar_polys, small_planar_polys)
    def test_vanishes_over_planted_common_roots(self, root, a, b, c):
        """Two curves through a chosen rational point give a resultant vanishing at its x."""
        x0, y0 = root
        f = (_Y - y0) * (1 + a * a) + (_X - x0) * b
        g = (_Y - y0) ** 2 + (_X - x0) * c
        assert resultant(f, g, "y").specialize("x", x0) == 0

    @pytest.mark.unit
    def test_both_constant_in_y(self, X):
        with pytest.raises(ArityError):
            resultant(X + 1, X - 1, "y")


class TestSolveBivariate:
    """Certified real solving."""

    @pytest.mark.unit
    def test_shear_order(self):
        shears = shear_sequence()
        assert [next(shears) for _ in range(5)] == [0, 1, -1, 2, -2]

    @pytest.mark.unit
    def test_single_rational_solution(self, X, Y):
        """xy = 1, y^2 = x meet only at (1, 1) over the reals."""
        solutions = solve_bivariate(X * Y - 1, Y**2 - X)
        assert len(solutions) == 1
        assert solutions[0].contains((1, 1))
        assert solutions[0].multiplicity_note is Multiplicity.SIMPLE

    @pytest.mark.unit
    def test_circle_and_diagonal(self, X, Y):
        """x^2 + y^2 = 1 and x = y meet at +-(1/sqrt2, 1/sqrt2)."""
        solutions = solve_bivariate(X**2 + Y**2 - 1, X - Y)
        assert len(solutions) == 2
        assert solutions[0].box.disjoint(solutions[1].box)
        refined = [s.refine(Fraction(1, 10**8)) for s in solutions]
        root = 2**-0.5
        assert abs(float(refined[0].point[0]) + root) < 1e-7
        assert abs(float(refined[1].point[1]) - root) < 1e-7

    @pytest.mark.unit
    def test_vertical_line_needs_a_shear(self, X, Y):
        """x = 2 has no y; the solver shears and still finds (2, 1) and (2, -1)."""
        solutions = solve_bivariate(X - 2, Y**2 - 1)
        assert [s.point for s in solutions] == [(2, -1), (2, 1)]

    @pytest.mark.unit
    def test_no_real_solutions(self, X, Y):
        assert solve_bivariate(X**2 + Y**2 + 1, X - Y) == []

    @pytest.mark.unit
    def test_nonzero_constant(self, X):
        assert solve_bivariate(Polynomial.constant(3), X) == []

    @pytest.mark.unit
    def test_common_factor(self, X, Y):
        with pytest.raises(NonZeroDimensionalError):
            solve_bivariate((X - Y) * (X + 1), (X - Y) * (Y + 2))

    @pytest.mark.unit
    def test_zero_polynomial(self, X):
        with pytest.raises(NonZeroDimensionalError):
            solve_bivariate(Polynomial.zero(), X)

    @pytest.mark.unit
    def test_stacked_solutions_on_rational_lines(self, X, Y):
        """Pairs of solutions over x = -1 and x = 1 are read off the specialised pairs."""
        solutions = solve_bivariate(Y**2 - 1, X**2 + Y**2 - 2)
        assert [s.point for s in solutions] == [(-1, -1), (-1, 1), (1, -1), (1, 1)]
        assert all(s.multiplicity_note is Multiplicity.SIMPLE for s in solutions)

    @pytest.mark.unit
    def test_tangency_is_flagged(self, X, Y):
        """y = x^2 touches y = 0 at the origin; the Jacobian vanishes there."""
        solutions = solve_bivariate(Y - X**2, Y)
        assert len(solutions) == 1
        assert solutions[0].contains((0, 0))
        assert solutions[0].multiplicity_note is Multiplicity.UNKNOWN

    @pytest.mark.slow
    @pytest.mark.property
    @given(
        st.lists(rationals, min_size=1, max_size=3, unique=True),
        st.lists(st.integers(-3, 3), max_size=3),
        small_planar_polys,
    )
    def test_finds_every_planted_solution(self, xs, h_coeffs, k):
        """The real solutions of prod(x - x_i) + (y - h(x)) k = 0, y = h(x) are exactly (x_i, h(x_i))."""
        h = Polynomial.constant(0)
        for i, coeff in enumerate(h_coeffs):
            h = h + coeff * _X**i
        product = Polynomial.constant(1)
        for xi in xs:
            product = product * (_X - xi)
        solutions = solve_bivariate(product + (_Y - h) * k, _Y - h)
        planted = [(xi, sum(coeff * xi**i for i, coeff in enumerate(h_coeffs))) for xi in xs]
        assert len(solutions) == len(planted)
        for point in planted:
            assert sum(s.contains(point) for s in solutions) == 1


class TestFibers:
    """Fibers of the registry maps."""

    @pytest.mark.integration
    @pytest.mark.parametrize("target", [(1, 0), (-1, 0)])
    def test_omitted_points(self, F, target):
        result = fiber(F, target, FiberMode.EXACT)
        assert result.is_empty
        assert result.mode is FiberMode.EXACT

    @pytest.mark.integration
    def test_fiber_through_known_point(self, F):
        """F(1, 0) = (5, -35)."""
        result = fiber(F, (5, -35))
        assert any(s.contains((1, 0)) for s in result.solutions)
        boxes = [s.box for s in result.solutions]
        assert all(a.disjoint(b) for i, a in enumerate(boxes) for b in boxes[i + 1:])

    @pytest.mark.integration
    def test_origin(self, F):
        assert any(s.contains((0, 0)) for s in fiber(F, (0, 0)).solutions)

    @pytest.mark.integration
    def test_approximate_is_a_lower_bound(self, F):
        exact = fiber(F, (5, -35), FiberMode.EXACT)
        approx = fiber(F, (5, -35), FiberMode.APPROXIMATE)
        assert approx.mode is FiberMode.APPROXIMATE
        assert 1 <= approx.count <= exact.count
        assert any(abs(float(s.point[0]) - 1) < 1e-6 and abs(float(s.point[1])) < 1e-6 for s in approx.solutions)

    @pytest.mark.unit
    def test_exact_mode_gate(self):
        with pytest.raises(IneligibleMapError):
            fiber(map_service.get_map("f"), (0, 0), FiberMode.EXACT)

    @pytest.mark.integration
    def test_double_preimage_of_a_critical_value(self, phi):
        """phi folds onto (2, 0): (-1, 0) is a double preimage and (2, 0) a simple one."""
        result = fiber(phi, (2, 0), FiberMode.EXACT)
        assert [s.point for s in result.solutions] == [(-1, 0), (2, 0)]
        assert [s.multiplicity_note for s in result.solutions] == [Multiplicity.UNKNOWN, Multiplicity.SIMPLE]

    @pytest.mark.integration
    def test_both_critical_values(self, phi):
        """The fold is symmetric: over (-2, 0) the double point is (1, 0)."""
        result = fiber(phi, (-2, 0), FiberMode.EXACT)
        assert [s.point for s in result.solutions] == [(-2, 0), (1, 0)]
        assert result.solutions[1].multiplicity_note is Multiplicity.UNKNOWN

    @pytest.mark.integration
    def test_staged_fiber_of_f(self, F, phi):
        result = staged_fiber(phi, F, (0, 0))
        assert result.mode is FiberMode.APPROXIMATE
        assert any(abs(float(s.point[0])) < 1e-6 and abs(float(s.point[1])) < 1e-6 for s in result.solutions)

    @pytest.mark.unit
    def test_polish_is_exact_at_a_root(self, phi):
        """phi(1, 0) = (-2, 0) and the Jacobian there is singular, so the point is returned unchanged."""
        assert polish(phi, (-2, 0), (1.0, 0.0)) == (1, 0)

    @pytest.mark.unit
    def test_approximate_roots_of_phi(self, phi):
        """z^3 - 3z = 0 has real roots 0 and +-sqrt(3)."""
        found = approximate_roots(phi, (0.0, 0.0))
        xs = sorted(round(px, 6) for px, py, _ in found if abs(py) < 1e-9)
        assert xs == [round(-(3**0.5), 6), 0.0, round(3**0.5, 6)]
