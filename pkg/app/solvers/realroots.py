"""
Real root counting and isolation for univariate rational polynomials.

Sturm chains are built from sign-corrected pseudo-remainders with the
content stripped at every step; signs are evaluated with integer-only
homogeneous Horner so no rational arithmetic happens in the inner loop.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence, Tuple

from sympy import Poly

from app.algebra import bridge
from app.algebra.interval import Interval
from app.algebra.poly import Polynomial
from app.core.config import settings
from app.core.exceptions import ArityError, CertificationStalledError, NotSquareFreeError, ZeroPolynomialError

logger = logging.getLogger(__name__)

IntCoeffs = Tuple[int, ...]  # highest degree first


@dataclass(frozen=True)
class IsolatingInterval:
    """A closed interval holding exactly one real root of a square-free polynomial."""

    interval: Interval
    poly: Polynomial

    @property
    def is_exact(self) -> bool:
        return self.interval.is_point

    @property
    def value(self) -> Fraction:
        """The root itself when exact, otherwise the midpoint."""
        return self.interval.midpoint

    def __str__(self) -> str:
        return str(self.interval.lo) if self.is_exact else str(self.interval)


def main_variable(f: Polynomial) -> str:
    present = [v for v in f.vars if f.degree(v) > 0]
    if len(present) > 1:
        raise ArityError(f"{f} is not univariate")
    return present[0] if present else "x"


def _to_zz(f: Polynomial) -> Poly:
    return bridge.to_sympy(bridge.primitive(f), (main_variable(f),))


def _signed_primitive(p: Poly) -> Poly:
    content = abs(int(p.content()))
    return p.exquo_ground(content) if content > 1 else p


@lru_cache(maxsize=256)
def sturm_chain(f: Polynomial) -> Tuple[IntCoeffs, ...]:
    """Integer Sturm chain of a square-free polynomial, each entry high-degree first."""
    if f.is_zero():
        raise ZeroPolynomialError("Sturm chain of the zero polynomial")
    a = _signed_primitive(_to_zz(f))
    if a.degree() <= 0:
        return (tuple(int(c) for c in a.all_coeffs()),)
    b = _signed_primitive(a.diff())
    chain = [a, b]
    while b.degree() > 0:
        r = a.prem(b)
        if r.is_zero:
            raise NotSquareFreeError(f"{f} has repeated roots")
        if int(b.LC()) < 0 and (a.degree() - b.degree() + 1) % 2:
            r = -r
        a, b = b, _signed_primitive(-r)
        chain.append(b)
    logger.debug("Sturm chain of degree %d has %d entries", chain[0].degree(), len(chain))
    return tuple(tuple(int(c) for c in p.all_coeffs()) for p in chain)


def sign_at(coeffs: IntCoeffs, value: Fraction) -> int:
    """Sign of the polynomial at n/d via homogeneous Horner on integers."""
    n, d = value.numerator, value.denominator
    acc = coeffs[0]
    scale = 1
    for c in coeffs[1:]:
        scale *= d
        acc = acc * n + c * scale
    return (acc > 0) - (acc < 0)


def _variations(chain: Sequence[IntCoeffs], value: Fraction) -> int:
    count = 0
    previous = 0
    for coeffs in chain:
        s = sign_at(coeffs, value)
        if s:
            if previous and s != previous:
                count += 1
            previous = s
    return count


def _count(chain: Sequence[IntCoeffs], lo: Fraction, hi: Fraction) -> int:
    """Distinct roots in the open interval (lo, hi)."""
    if hi <= lo:
        return 0
    on_hi = 1 if sign_at(chain[0], hi) == 0 else 0
    return _variations(chain, lo) - _variations(chain, hi) - on_hi


def squarefree_part(f: Polynomial) -> Polynomial:
    main_variable(f)
    return bridge.squarefree_part(f)


def sturm_count(f: Polynomial, interval: Interval) -> int:
    """Number of distinct real roots of a square-free f in the open interval."""
    return _count(sturm_chain(f), interval.lo, interval.hi)


def cauchy_bound(f: Polynomial) -> Fraction:
    """Power of two strictly exceeding the modulus of every real root."""
    coeffs = [abs(c) for c in sturm_chain(f)[0]]
    lead = coeffs[0]
    bound = 1 + Fraction(max(coeffs[1:], default=0), lead)
    power = Fraction(1)
    while power <= bound:
        power *= 2
    return power


def count_real_roots(f: Polynomial) -> int:
    sf = squarefree_part(f)
    if sf.is_constant():
        return 0
    bound = cauchy_bound(sf)
    return sturm_count(sf, Interval(-bound, bound))


def _separate(chain: Sequence[IntCoeffs], lo: Fraction, hi: Fraction) -> Tuple[Fraction, Fraction]:
    """Shrink a one-root open interval until neither endpoint is a root."""
    f = chain[0]
    while sign_at(f, lo) == 0 or sign_at(f, hi) == 0:
        mid = (lo + hi) / 2
        if sign_at(f, mid) == 0:
            return mid, mid
        if _count(chain, lo, mid) == 1:
            hi = mid
        else:
            lo = mid
    return lo, hi


def _isolate_squarefree(sf: Polynomial, max_depth: int) -> List[IsolatingInterval]:
    var = main_variable(sf)
    if sf.degree(var) == 1:
        c1, c0 = sf.coeff_in(var, 1).constant_value(), sf.coeff_in(var, 0).constant_value()
        return [IsolatingInterval(Interval.point(-c0 / c1), sf)]

    chain = sturm_chain(sf)
    bound = cauchy_bound(sf)
    found: List[IsolatingInterval] = []
    stack = [(-bound, bound, _count(chain, -bound, bound), 0)]
    while stack:
        lo, hi, count, depth = stack.pop()
        if count == 0:
            continue
        if count == 1:
            lo, hi = _separate(chain, lo, hi)
            found.append(IsolatingInterval(Interval(lo, hi), sf))
            continue
        if depth >= max_depth:
            raise CertificationStalledError(f"root isolation of {sf} exceeded depth {max_depth}")
        mid = (lo + hi) / 2
        if sign_at(chain[0], mid) == 0:
            found.append(IsolatingInterval(Interval.point(mid), sf))
        stack.append((lo, mid, _count(chain, lo, mid), depth + 1))
        stack.append((mid, hi, _count(chain, mid, hi), depth + 1))
    return found


def _make_disjoint(found: List[IsolatingInterval]) -> List[IsolatingInterval]:
    """Halve overlapping neighbours until all closed intervals are pairwise disjoint."""
    while True:
        found.sort(key=lambda iv: (iv.interval.lo, iv.interval.hi))
        clash = next(
            (i for i in range(len(found) - 1) if found[i].interval.overlaps(found[i + 1].interval)),
            None,
        )
        if clash is None:
            return found
        for i in (clash, clash + 1):
            found[i] = refine(found[i], found[i].interval.width / 2)


def isolate_roots(f: Polynomial, max_depth: int = None, exact_rationals: bool = False) -> List[IsolatingInterval]:
    """
    One isolating interval per distinct real root, ascending and pairwise disjoint.

    With `exact_rationals` the square-free part is factored first so that
    every rational root comes back as a degenerate point interval.
    """
    if f.is_zero():
        raise ZeroPolynomialError("cannot isolate roots of the zero polynomial")
    max_depth = max_depth or settings.isolation_max_depth
    sf = squarefree_part(f)
    if sf.is_constant():
        return []
    if exact_rationals:
        pieces = [factor for factor, _ in bridge.factor_list(sf) if not factor.is_constant()]
    else:
        pieces = [sf]
    found: List[IsolatingInterval] = []
    for piece in pieces:
        found.extend(_isolate_squarefree(piece, max_depth))
    found = _make_disjoint(found)
    logger.debug("isolated %d real roots of a degree-%d polynomial", len(found), sf.total_degree())
    return found


def refine(iv: IsolatingInterval, width: Fraction) -> IsolatingInterval:
    """Bisect on sign changes until the interval is no wider than `width`."""
    if iv.is_exact or iv.interval.width <= width:
        return iv
    f = sturm_chain(iv.poly)[0]
    lo, hi = iv.interval.lo, iv.interval.hi
    s_lo = sign_at(f, lo)
    while hi - lo > width:
        mid = (lo + hi) / 2
        s_mid = sign_at(f, mid)
        if s_mid == 0:
            return IsolatingInterval(Interval.point(mid), iv.poly)
        if s_mid == s_lo:
            lo = mid
        else:
            hi = mid
    return IsolatingInterval(Interval(lo, hi), iv.poly)


def rational_roots(f: Polynomial) -> List[Fraction]:
    """Exact rational roots, read off the linear factors over QQ."""
    var = main_variable(f)
    roots = []
    for factor, _ in bridge.factor_list(f):
        if factor.degree(var) == 1:
            roots.append(-factor.coeff_in(var, 0).constant_value() / factor.coeff_in(var, 1).constant_value())
    return sorted(roots)
