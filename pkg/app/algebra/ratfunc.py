"""
Rational functions in x, y, z and the unit-Jacobian lift of a planar map.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple, Union

from app.algebra import bridge
from app.algebra.poly import VARIABLES, PolyMap, Polynomial, det, jacobian_det
from app.core.exceptions import ArityError, DivisionByZeroFunctionError, MissingCertificateError

logger = logging.getLogger(__name__)

XYZ = ("x", "y", "z")


def _normalize(num: Polynomial, den: Polynomial) -> Tuple[Polynomial, Polynomial]:
    if den.is_zero():
        raise DivisionByZeroFunctionError("denominator is the zero polynomial")
    if num.is_zero():
        return num, Polynomial.constant(1)
    if num == den:
        return Polynomial.constant(1), Polynomial.constant(1)
    if not den.is_constant() and not num.is_constant():
        common = bridge.gcd(num, den)
        if not common.is_constant():
            num, den = bridge.exquo(num, common), bridge.exquo(den, common)
    scale = bridge.primitive(den).leading_term()[1] / den.leading_term()[1]
    return num * scale, den * scale


class RationalFunction:
    """num / den in lowest terms, den an integer primitive with positive leading coefficient."""

    __slots__ = ("num", "den")

    def __init__(self, num: Union[Polynomial, int, Fraction], den: Union[Polynomial, int, Fraction] = 1) -> None:
        num = num if isinstance(num, Polynomial) else Polynomial.constant(num)
        den = den if isinstance(den, Polynomial) else Polynomial.constant(den)
        self.num, self.den = _normalize(num, den)

    @classmethod
    def _coerce(cls, value: Union["RationalFunction", Polynomial, int, Fraction]) -> "RationalFunction":
        return value if isinstance(value, RationalFunction) else cls(value)

    def __add__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other) -> "RationalFunction":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RationalFunction":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        if other.num.is_zero():
            raise DivisionByZeroFunctionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RationalFunction":
        return self._coerce(other) / self

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (Polynomial, int, Fraction)):
            other = RationalFunction(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def partial(self, var: str) -> "RationalFunction":
        """Quotient rule."""
        dn, dd = self.num.partial(var), self.den.partial(var)
        if dd.is_zero():
            return RationalFunction(dn, self.den)
        return RationalFunction(dn * self.den - self.num * dd, self.den * self.den)

    def eval_exact(self, point: Sequence[Fraction]) -> Fraction:
        """Value at a point given over (x, y, z)[:len(point)]."""
        vars = VARIABLES[: len(point)]
        den = self.den.with_vars(vars).eval_exact(point)
        if den == 0:
            raise DivisionByZeroFunctionError(f"pole at {tuple(point)}")
        return self.num.with_vars(vars).eval_exact(point) / den

    def __str__(self) -> str:
        if self.den == 1:
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __repr__(self) -> str:
        return f"RationalFunction({str(self)!r})"


@dataclass(frozen=True)
class RationalMap:
    name: str
    components: Tuple[RationalFunction, ...]
    domain_vars: Tuple[str, ...] = XYZ

    def __call__(self, point: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        return tuple(c.eval_exact(point) for c in self.components)


def rf_partial(f: RationalFunction, var: str) -> RationalFunction:
    return f.partial(var)


def rf_jacobian_det(m: RationalMap) -> RationalFunction:
    """
    Determinant of the matrix of partials.

    Each row is brought to one common denominator (the row's denominator
    squared at most), the polynomial determinant is taken, and the quotient
    is reduced once.
    """
    if len(m.components) != len(m.domain_vars):
        raise ArityError(f"Jacobian of {m.name!r} is not square")
    rows: List[List[Polynomial]] = []
    denominator = Polynomial.constant(1)
    for component in m.components:
        d = component.den
        if d.is_constant():
            rows.append([component.num.partial(v) * (1 / d.constant_value()) for v in m.domain_vars])
            continue
        dd = {v: d.partial(v) for v in m.domain_vars}
        rows.append([component.num.partial(v) * d - component.num * dd[v] for v in m.domain_vars])
        denominator = denominator * d * d
    return RationalFunction(det(rows), denominator)


def build_G(base: PolyMap, certificate) -> RationalMap:
    """
    The lift (base1, base2, z / det(D base)) of a planar map.

    `certificate` must show det(D base) never vanishes: either a sign
    certificate for that exact polynomial or a chain-rule certificate for the
    composed map.
    """
    from app.schemas import ChainRuleCertificate, SignCertificate

    if len(base.components) != 2:
        raise ArityError(f"lift needs a planar base map, {base.name!r} has {len(base.components)} components")
    j = jacobian_det(base)
    if certificate is None:
        raise MissingCertificateError(f"no non-vanishing Jacobian certificate for {base.name!r}")
    if isinstance(certificate, SignCertificate):
        if certificate.polynomial != j:
            raise MissingCertificateError("sign certificate is for a different polynomial")
        if not certificate.never_vanishes:
            raise MissingCertificateError(f"det(D {base.name}) vanishes; the lift is not defined everywhere")
    elif isinstance(certificate, ChainRuleCertificate):
        if certificate.map_name != base.name or not certificate.never_vanishes:
            raise MissingCertificateError(f"chain-rule certificate does not cover {base.name!r}")
    else:
        raise MissingCertificateError(f"unsupported certificate {type(certificate).__name__}")
    z = Polynomial.var("z")
    components = tuple(RationalFunction(c.with_vars(XYZ)) for c in base.components) + (RationalFunction(z, j),)
    logger.info("built lift of %s; Jacobian degree %d", base.name, j.total_degree())
    return RationalMap(f"G[{base.name}]", components)
