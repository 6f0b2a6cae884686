"""
Exact sparse polynomials in x, y, z over the rationals.

Terms are kept in a dict from exponent triples (ex, ey, ez) to nonzero
coefficients; integral coefficients are stored as `int` and every other one
as a reduced `Fraction`. The declared variable list travels with the value
as metadata and is widened to the union on arithmetic.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from app.algebra.interval import Box, Interval
from app.core.exceptions import ArityError

VARIABLES: Tuple[str, ...] = ("x", "y", "z")
INDEX: Dict[str, int] = {name: i for i, name in enumerate(VARIABLES)}

Exponent = Tuple[int, int, int]
Coefficient = Union[int, Fraction]
Scalar = Union[int, Fraction]


def _norm(c: Coefficient) -> Coefficient:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _ordered_vars(names: Iterable[str]) -> Tuple[str, ...]:
    wanted = set(names)
    unknown = wanted - set(VARIABLES)
    if unknown:
        raise ArityError(f"unknown variables {sorted(unknown)}; only x, y, z are supported")
    return tuple(v for v in VARIABLES if v in wanted)


def grlex_key(exponent: Exponent) -> Tuple[int, int, int, int]:
    """Sort key for graded-lex order with x > y > z (use with reverse=True)."""
    return (sum(exponent),) + tuple(exponent)


class Polynomial:
    __slots__ = ("_terms", "_vars", "_hash")

    def __init__(self, terms: Optional[Mapping[Exponent, Scalar]] = None, vars: Iterable[str] = ()) -> None:
        clean: Dict[Exponent, Coefficient] = {}
        used = set(vars)
        for exponent, coeff in (terms or {}).items():
            if len(exponent) != 3 or any(e < 0 for e in exponent):
                raise ArityError(f"bad exponent vector {exponent!r}")
            coeff = _norm(Fraction(coeff)) if not isinstance(coeff, int) else coeff
            if coeff:
                exponent = tuple(int(e) for e in exponent)
                clean[exponent] = coeff
                used.update(VARIABLES[i] for i, e in enumerate(exponent) if e)
        self._terms = clean
        self._vars = _ordered_vars(used)
        self._hash: Optional[int] = None

    @classmethod
    def _raw(cls, terms: Dict[Exponent, Coefficient], vars: Tuple[str, ...]) -> "Polynomial":
        """Build from an already clean term map (no zero coefficients, vars covering the support)."""
        poly = cls.__new__(cls)
        poly._terms = terms
        poly._vars = vars
        poly._hash = None
        return poly

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------
    @classmethod
    def zero(cls, vars: Iterable[str] = ()) -> "Polynomial":
        return cls({}, vars)

    @classmethod
    def constant(cls, value: Scalar, vars: Iterable[str] = ()) -> "Polynomial":
        return cls({(0, 0, 0): value}, vars)

    @classmethod
    def var(cls, name: str) -> "Polynomial":
        if name not in INDEX:
            raise ArityError(f"unknown variable {name!r}")
        exponent = [0, 0, 0]
        exponent[INDEX[name]] = 1
        return cls({tuple(exponent): 1})

    # ------------------------------------------------------------------
    # inspection
    # ------------------------------------------------------------------
    @property
    def vars(self) -> Tuple[str, ...]:
        return self._vars

    @property
    def terms(self) -> Dict[Exponent, Fraction]:
        return {e: Fraction(c) for e, c in self._terms.items()}

    def items(self) -> Iterator[Tuple[Exponent, Fraction]]:
        """Terms in canonical (graded-lex descending) order."""
        for exponent in sorted(self._terms, key=grlex_key, reverse=True):
            yield exponent, Fraction(self._terms[exponent])

    def coefficient(self, exponent: Exponent) -> Fraction:
        return Fraction(self._terms.get(tuple(exponent), 0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(e == (0, 0, 0) for e in self._terms)

    def constant_value(self) -> Fraction:
        return Fraction(self._terms.get((0, 0, 0), 0))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def degree(self, var: str) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        i = INDEX[var]
        return max((e[i] for e in self._terms), default=-1)

    def leading_term(self) -> Tuple[Exponent, Fraction]:
        exponent = max(self._terms, key=grlex_key)
        return exponent, Fraction(self._terms[exponent])

    def coeff_in(self, var: str, k: int) -> "Polynomial":
        """Coefficient of var^k, as a polynomial in the other variables."""
        i = INDEX[var]
        out: Dict[Exponent, Coefficient] = {}
        for e, c in self._terms.items():
            if e[i] == k:
                reduced = list(e)
                reduced[i] = 0
                out[tuple(reduced)] = c
        return Polynomial._raw(out, self._vars)

    def leading_coeff_in(self, var: str) -> "Polynomial":
        return self.coeff_in(var, self.degree(var))

    def univariate_coefficients(self, var: str) -> List[Fraction]:
        """Dense coefficients, constant term first; only valid when var is the sole variable present."""
        i = INDEX[var]
        if any(e[j] for e in self._terms for j in range(3) if j != i):
            raise ArityError(f"{self} is not univariate in {var}")
        coeffs = [Fraction(0)] * (self.degree(var) + 1)
        for e, c in self._terms.items():
            coeffs[e[i]] = Fraction(c)
        return coeffs

    def with_vars(self, vars: Iterable[str]) -> "Polynomial":
        return Polynomial._raw(dict(self._terms), _ordered_vars(set(vars) | set(self._vars)))

    # ------------------------------------------------------------------
    # ring operations
    # ------------------------------------------------------------------
    def _coerce(self, other: Union["Polynomial", Scalar]) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other)
        return NotImplemented

    def __add__(self, other: Union["Polynomial", Scalar]) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = _norm(out.get(e, 0) + c)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial._raw(out, _ordered_vars(self._vars + other._vars))

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw({e: -c for e, c in self._terms.items()}, self._vars)

    def __sub__(self, other: Union["Polynomial", Scalar]) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other: Union["Polynomial", Scalar]) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            if not other:
                return Polynomial.zero(self._vars)
            return Polynomial._raw({e: _norm(c * other) for e, c in self._terms.items()}, self._vars)
        if not isinstance(other, Polynomial):
            return NotImplemented
        out: Dict[Exponent, Coefficient] = {}
        for (a0, a1, a2), ca in self._terms.items():
            for (b0, b1, b2), cb in other._terms.items():
                e = (a0 + b0, a1 + b1, a2 + b2)
                out[e] = out.get(e, 0) + ca * cb
        out = {e: _norm(c) for e, c in out.items() if c}
        return Polynomial._raw(out, _ordered_vars(self._vars + other._vars))

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> "Polynomial":
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return self * (1 / Fraction(other))

    def __pow__(self, n: int) -> "Polynomial":
        if not isinstance(n, int) or n < 0:
            raise ArityError(f"exponent must be a natural number, got {n!r}")
        result = Polynomial.constant(1, self._vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __str__(self) -> str:
        from app.algebra.parser import print_canonical

        return print_canonical(self)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r})"

    # ------------------------------------------------------------------
    # calculus and substitution
    # ------------------------------------------------------------------
    def partial(self, var: str) -> "Polynomial":
        i = INDEX[var]
        out: Dict[Exponent, Coefficient] = {}
        for e, c in self._terms.items():
            if e[i]:
                lowered = list(e)
                lowered[i] -= 1
                out[tuple(lowered)] = _norm(c * e[i])
        return Polynomial._raw(out, self._vars)

    def compose(self, subs: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute subs[k] for the k-th declared variable."""
        if len(subs) != len(self._vars):
            raise ArityError(f"compose needs {len(self._vars)} substitutions, got {len(subs)}")
        by_index = {INDEX[v]: s for v, s in zip(self._vars, subs)}
        powers: Dict[Tuple[int, int], Polynomial] = {}

        def power(i: int, k: int) -> Polynomial:
            if (i, k) not in powers:
                powers[(i, k)] = by_index[i] ** k
            return powers[(i, k)]

        result_vars = set()
        for s in subs:
            result_vars.update(s.vars)
        result = Polynomial.zero(result_vars)
        for e, c in self._terms.items():
            term = Polynomial.constant(c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def specialize(self, var: str, value: Scalar) -> "Polynomial":
        """Replace one variable by a rational value."""
        i = INDEX[var]
        value = Fraction(value)
        out: Dict[Exponent, Coefficient] = {}
        for e, c in self._terms.items():
            reduced = list(e)
            reduced[i] = 0
            key = tuple(reduced)
            out[key] = out.get(key, 0) + c * value ** e[i]
        out = {e: _norm(c) for e, c in out.items() if c}
        return Polynomial._raw(out, tuple(v for v in self._vars if v != var))

    def eval_exact(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != len(self._vars):
            raise ArityError(f"point has {len(point)} coordinates, polynomial has {len(self._vars)} variables")
        values = [Fraction(0)] * 3
        for v, p in zip(self._vars, point):
            values[INDEX[v]] = Fraction(p)
        total = Fraction(0)
        for (a, b, c), coeff in self._terms.items():
            total += coeff * values[0] ** a * values[1] ** b * values[2] ** c
        return total

    def eval_interval(self, box: Box) -> Interval:
        if len(box) != len(self._vars):
            raise ArityError(f"box has {len(box)} intervals, polynomial has {len(self._vars)} variables")
        ranges: List[Interval] = [Interval.point(0)] * 3
        for v, iv in zip(self._vars, box.intervals):
            ranges[INDEX[v]] = iv
        total = Interval.point(0)
        for e, coeff in self._terms.items():
            term = Interval.point(coeff)
            for i, k in enumerate(e):
                if k:
                    term = term * (ranges[i] ** k)
            total = total + term
        return total

    def sign_at(self, point: Sequence[Scalar]) -> int:
        value = self.eval_exact(point)
        return (value > 0) - (value < 0)


def x() -> Polynomial:
    return Polynomial.var("x")


def y() -> Polynomial:
    return Polynomial.var("y")


def z() -> Polynomial:
    return Polynomial.var("z")


def det(matrix: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Determinant by cofactor expansion along the first row."""
    n = len(matrix)
    if n == 0 or any(len(row) != n for row in matrix):
        raise ArityError("determinant needs a non-empty square matrix")
    if n == 1:
        return matrix[0][0]
    if n == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    total = Polynomial.zero()
    for j, entry in enumerate(matrix[0]):
        if entry.is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        cofactor = entry * det(minor)
        total = total + cofactor if j % 2 == 0 else total - cofactor
    return total


@dataclass(frozen=True)
class PolyMap:
    """Ordered polynomial components sharing one domain variable list."""

    name: str
    components: Tuple[Polynomial, ...]
    domain_vars: Tuple[str, ...] = ("x", "y")

    def __post_init__(self) -> None:
        if len(self.components) not in (2, 3):
            raise ArityError(f"map {self.name!r} needs 2 or 3 components, got {len(self.components)}")
        domain = _ordered_vars(self.domain_vars)
        for component in self.components:
            if not set(component.vars) <= set(domain):
                raise ArityError(f"component {component} of {self.name!r} uses variables outside {domain}")
        object.__setattr__(self, "domain_vars", domain)
        object.__setattr__(self, "components", tuple(c.with_vars(domain) for c in self.components))

    @classmethod
    def identity(cls, dim: int = 2) -> "PolyMap":
        names = VARIABLES[:dim]
        return cls("identity", tuple(Polynomial.var(v) for v in names), names)

    def __call__(self, point: Sequence[Scalar]) -> Tuple[Fraction, ...]:
        return tuple(c.eval_exact(point) for c in self.components)

    def __len__(self) -> int:
        return len(self.components)

    def max_degree(self) -> int:
        return max(c.total_degree() for c in self.components)

    def compose(self, inner: "PolyMap", name: Optional[str] = None) -> "PolyMap":
        """self ∘ inner, expanded componentwise."""
        if len(inner.components) != len(self.domain_vars):
            raise ArityError(
                f"cannot compose {self.name!r} ({len(self.domain_vars)} variables) "
                f"with {inner.name!r} ({len(inner.components)} components)"
            )
        return PolyMap(
            name or f"{self.name}∘{inner.name}",
            tuple(c.compose(inner.components) for c in self.components),
            inner.domain_vars,
        )


def jacobian(m: PolyMap) -> List[List[Polynomial]]:
    """Row i holds the gradient of component i."""
    return [[c.partial(v) for v in m.domain_vars] for c in m.components]


def jacobian_det(m: PolyMap) -> Polynomial:
    if len(m.components) != len(m.domain_vars):
        raise ArityError(f"Jacobian of {m.name!r} is not square")
    return det(jacobian(m))
