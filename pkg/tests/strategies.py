"""hypothesis strategies for rationals and small polynomials."""
from fractions import Fraction

from hypothesis import strategies as st

from app.algebra.poly import Polynomial

rationals = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 6))
exponents = st.tuples(st.integers(0, 3), st.integers(0, 3), st.just(0))
planar_polys = st.dictionaries(exponents, st.integers(-9, 9), max_size=5).map(lambda t: Polynomial(t, ("x", "y")))
points = st.tuples(rationals, rationals)
small_planar_polys = st.dictionaries(
    st.tuples(st.integers(0, 2), st.integers(0, 2), st.just(0)), st.integers(-5, 5), max_size=3
).map(lambda t: Polynomial(t, ("x", "y")))
widths = st.builds(Fraction, st.integers(1, 10), st.integers(1, 4))
unit_fractions = st.builds(Fraction, st.integers(0, 8), st.just(8))
# rationals on a 1/6 lattice, so a grid offset by 1/12 never hits one
lattice_roots = st.lists(st.builds(Fraction, st.integers(-30, 30), st.integers(1, 3)), min_size=1, max_size=5, unique=True)
