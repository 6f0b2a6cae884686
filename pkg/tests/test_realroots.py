# Sturm counting and root isolation tests
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from app.algebra.interval import Interval
from app.algebra.poly import Polynomial
from app.core.exceptions import NotSquareFreeError, ZeroPolynomialError
from app.solvers.realroots import (
    count_real_roots,
    isolate_roots,
    rational_roots,
    refine,
    sturm_chain,
    sturm_count,
    squarefree_part,
)
from tests.strategies import lattice_roots

z = Polynomial.var("z")
X = Polynomial.var("x")


def _proportional(p: Polynomial, q: Polynomial) -> bool:
    (_, a), (_, b) = p.leading_term(), q.leading_term()
    return p * b == q * a


class TestSquarefreePart:
    """Square-free parts."""

    @pytest.mark.unit
    def test_cube(self):
        assert _proportional(squarefree_part((X - 1) ** 3), X - 1)

    @pytest.mark.unit
    def test_double_root_of_critical_value_cubic(self):
        """z^3 - 3z - 2 = (z - 2)(z + 1)^2."""
        assert _proportional(squarefree_part(z**3 - 3 * z - 2), z**2 - z - 2)

    @pytest.mark.unit
    def test_already_square_free(self):
        assert _proportional(squarefree_part(X**2 + 1), X**2 + 1)


class TestSturmCount:
    """Counting distinct roots in open intervals."""

    @pytest.mark.unit
    def test_sqrt_two(self):
        assert sturm_count(X**2 - 2, Interval(0, 2)) == 1

    @pytest.mark.unit
    def test_no_real_roots(self):
        assert sturm_count(X**2 + 1, Interval(-10, 10)) == 0

    @pytest.mark.unit
    def test_after_square_free_part(self):
        assert sturm_count(squarefree_part(z**3 - 3 * z - 2), Interval(-10, 10)) == 2

    @pytest.mark.unit
    def test_root_at_right_endpoint_is_excluded(self):
        assert sturm_count(X**2 - 1, Interval(-2, 1)) == 1

    @pytest.mark.unit
    def test_repeated_roots_are_rejected(self):
        with pytest.raises(NotSquareFreeError):
            sturm_chain((X - 1) ** 2)

    @pytest.mark.unit
    def test_count_real_roots(self):
        assert count_real_roots((X - 1) ** 2 * (X + 3) * (X**2 + 1)) == 2

    @pytest.mark.property
    @given(st.lists(st.integers(-30, 30), min_size=1, max_size=5, unique=True))
    def test_count_matches_distinct_integer_roots(self, roots):
        p = Polynomial.constant(1)
        for r in roots:
            p = p * (X - r)
        assert count_real_roots(p * (X**2 + 3)) == len(roots)

    @pytest.mark.property
    @given(lattice_roots, st.integers(1, 9), st.integers(0, 371), st.integers(0, 371))
    def test_count_matches_sign_changes(self, roots, c, i, j):
        """On a grid finer than the root spacing, sign changes count the roots between two samples."""
        p = X**2 + c
        for r in roots:
            p = p * (X - r)
        samples = [Fraction(-31) + Fraction(k, 6) + Fraction(1, 12) for k in range(372)]
        lo, hi = sorted((i, j))
        signs = [p.eval_exact((t,)) > 0 for t in samples[lo : hi + 1]]
        changes = sum(a != b for a, b in zip(signs, signs[1:]))
        assert sturm_count(p, Interval(samples[lo], samples[hi])) == changes


class TestIsolateRoots:
    """Isolation and refinement."""

    @pytest.mark.unit
    def test_singular_points_of_phi(self):
        """3z^2 - 3 vanishes at -1 and 1."""
        found = isolate_roots(3 * z**2 - 3)
        assert len(found) == 2
        assert found[0].interval.contains(-1) and found[1].interval.contains(1)

    @pytest.mark.unit
    def test_exact_rationals(self):
        found = isolate_roots(z**3 - 3 * z - 2, exact_rationals=True)
        assert [iv.interval.lo for iv in found] == [-1, 2]
        assert all(iv.is_exact for iv in found)

    @pytest.mark.unit
    def test_no_real_roots(self):
        assert isolate_roots(X**2 + 1) == []

    @pytest.mark.unit
    def test_zero_polynomial(self):
        with pytest.raises(ZeroPolynomialError):
            isolate_roots(Polynomial.zero())

    @pytest.mark.unit
    def test_refine_sqrt_two(self):
        width = Fraction(1, 10**6)
        refined = [refine(iv, width) for iv in isolate_roots(X**2 - 2)]
        assert all(iv.interval.width <= width for iv in refined)
        assert abs(float(refined[1].value) - 2**0.5) < 1e-6
        assert abs(float(refined[0].value) + 2**0.5) < 1e-6

    @pytest.mark.unit
    def test_refine_hits_rational_root(self):
        """Bisection landing on the root returns a point interval."""
        iv = isolate_roots(X**2 - 1)[1]
        assert refine(iv, Fraction(1, 10**9)).interval.contains(1)

    @pytest.mark.property
    @given(st.lists(st.builds(Fraction, st.integers(-40, 40), st.integers(1, 9)), min_size=1, max_size=5, unique=True))
    def test_products_of_linear_factors(self, roots):
        """Each interval holds exactly one known root; intervals are disjoint and ascending."""
        roots = sorted(roots)
        p = Polynomial.constant(1)
        for r in roots:
            p = p * (X - r)
        found = isolate_roots(p)
        assert len(found) == len(roots)
        for iv, r in zip(found, roots):
            assert iv.interval.contains(r)
            assert sum(iv.interval.contains(other) for other in roots) == 1
        for a, b in zip(found, found[1:]):
            assert a.interval.hi < b.interval.lo

    @pytest.mark.unit
    def test_rational_roots(self):
        assert rational_roots((2 * X - 1) * (X + 3) * (X**2 - 2)) == [-3, Fraction(1, 2)]
