"""
Conversion between `Polynomial` and `sympy.Poly`.

sympy supplies the heavy elimination kernel (resultants, subresultant PRS,
multivariate gcd, square-free parts, factorization); everything crossing
this boundary stays exact.
"""
import logging
import math
from fractions import Fraction
from typing import List, Sequence, Tuple

import sympy
from sympy import Poly

from app.algebra.poly import INDEX, VARIABLES, Polynomial
from app.core.exceptions import ArityError, ZeroPolynomialError

logger = logging.getLogger(__name__)

SYMBOLS = {name: sympy.Symbol(name) for name in VARIABLES}


def _native(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def to_sympy(f: Polynomial, gens: Sequence[str]) -> Poly:
    """Poly over ZZ (integral coefficients) or QQ in the given generator order."""
    missing = set(f.vars) - set(gens)
    if any(f.degree(v) > 0 for v in missing):
        raise ArityError(f"{f} uses variables outside {tuple(gens)}")
    positions = [INDEX[g] for g in gens]
    data = {}
    integral = True
    for exponent, coeff in f.terms.items():
        data[tuple(exponent[i] for i in positions)] = sympy.Rational(coeff.numerator, coeff.denominator)
        integral = integral and coeff.denominator == 1
    domain = sympy.ZZ if integral else sympy.QQ
    if not data:
        return Poly(0, *[SYMBOLS[g] for g in gens], domain=domain)
    return Poly.from_dict(data, *[SYMBOLS[g] for g in gens], domain=domain)


def from_sympy(p: Poly, vars: Sequence[str] = ()) -> Polynomial:
    names = [str(g) for g in p.gens]
    positions = [INDEX[n] for n in names]
    terms = {}
    for monom, coeff in p.as_dict(native=True).items():
        exponent = [0, 0, 0]
        for i, k in zip(positions, monom):
            exponent[i] = k
        terms[tuple(exponent)] = _native(coeff)
    return Polynomial(terms, vars)


def joint_gens(*polys: Polynomial, first: str = None) -> Tuple[str, ...]:
    names = set()
    for f in polys:
        names.update(v for v in f.vars if f.degree(v) > 0)
    ordered = [v for v in VARIABLES if v in names]
    if first is not None:
        ordered = [first] + [v for v in ordered if v != first]
    return tuple(ordered) or ("x",)


def primitive(f: Polynomial) -> Polynomial:
    """Integer primitive associate with positive leading coefficient (graded-lex)."""
    if f.is_zero():
        return f
    coeffs = [c for _, c in f.items()]
    denominators = math.lcm(*(c.denominator for c in coeffs))
    numerators = math.gcd(*((c * denominators).numerator for c in coeffs))
    scale = Fraction(denominators, numerators)
    if f.leading_term()[1] < 0:
        scale = -scale
    return f * scale


def gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Primitive gcd; gcd(0, 0) = 0."""
    if f.is_zero():
        return primitive(g)
    if g.is_zero():
        return primitive(f)
    gens = joint_gens(f, g)
    result = to_sympy(f, gens).gcd(to_sympy(g, gens))
    return primitive(from_sympy(result, set(f.vars) | set(g.vars)))


def exquo(f: Polynomial, g: Polynomial) -> Polynomial:
    """Exact quotient f / g; g must divide f."""
    if g.is_zero():
        raise ZeroPolynomialError("division by the zero polynomial")
    if g.is_constant():
        return f / g.constant_value()
    gens = joint_gens(f, g)
    ff, gg = to_sympy(f, gens).to_field(), to_sympy(g, gens).to_field()
    return from_sympy(ff.exquo(gg), set(f.vars) | set(g.vars))


def squarefree_part(f: Polynomial) -> Polynomial:
    if f.is_zero():
        raise ZeroPolynomialError("square-free part of the zero polynomial")
    if f.is_constant():
        return Polynomial.constant(1, f.vars)
    gens = joint_gens(f)
    return primitive(from_sympy(to_sympy(f, gens).sqf_part(), f.vars))


def factor_list(f: Polynomial) -> List[Tuple[Polynomial, int]]:
    """Irreducible factors over QQ with multiplicities (constant dropped)."""
    gens = joint_gens(f)
    _, factors = to_sympy(f, gens).factor_list()
    return [(primitive(from_sympy(p, f.vars)), k) for p, k in factors]


def resultant(f: Polynomial, g: Polynomial, var: str) -> Polynomial:
    gens = joint_gens(f, g, first=var)
    result = to_sympy(f, gens).resultant(to_sympy(g, gens))
    if not isinstance(result, Poly):
        return Polynomial.constant(Fraction(str(result)))
    return from_sympy(result)


def subresultants(f: Polynomial, g: Polynomial, var: str) -> List[Polynomial]:
    """Subresultant PRS of f and g with respect to var, f and g first."""
    gens = joint_gens(f, g, first=var)
    chain = to_sympy(f, gens).subresultants(to_sympy(g, gens))
    return [from_sympy(p, set(f.vars) | set(g.vars)) for p in chain]


def sylvester_det(f: Polynomial, g: Polynomial, var: str) -> Polynomial:
    """Sylvester determinant with f's rows first, by fraction-free elimination."""
    m, n = f.degree(var), g.degree(var)
    if m < 0 or n < 0 or m + n == 0:
        raise ArityError(f"Sylvester matrix needs a positive degree in {var}")
    others = [v for v in joint_gens(f, g) if v != var] or ["x"]
    fc = [to_sympy(f.coeff_in(var, m - k), others).as_expr() for k in range(m + 1)]
    gc = [to_sympy(g.coeff_in(var, n - k), others).as_expr() for k in range(n + 1)]
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + fc + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gc + [0] * (size - n - 1 - i))
    value = sympy.Matrix(rows).det(method="bareiss")
    return from_sympy(Poly(sympy.expand(value), *[SYMBOLS[v] for v in others], domain=sympy.QQ))
