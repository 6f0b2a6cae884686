"""
Text grammar for polynomials, rationals, points and map definitions.

    expr    := ('+'|'-')? term (('+'|'-') term)*
    term    := factor ('*' factor)*
    factor  := base ('^' natural)?
    base    := rational | 'x' | 'y' | 'z' | '(' expr ')'
    rational:= integer ('/' positive-integer)?

Whitespace is insignificant, implicit multiplication and floating literals
are rejected. A leading unary minus negates the whole first term.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from app.algebra.poly import VARIABLES, PolyMap, Polynomial
from app.core.exceptions import ParseError, ParseErrorKind


@dataclass(frozen=True)
class _Token:
    kind: str  # "num", "var", "op", "end"
    text: str
    pos: int


def _tokenize(text: str, offset: int = 0) -> List[_Token]:
    tokens: List[_Token] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            start = i
            while i < len(text) and text[i].isdigit():
                i += 1
            tokens.append(_Token("num", text[start:i], offset + start))
        elif ch.isalpha():
            tokens.append(_Token("var", ch, offset + i))
            i += 1
        elif ch in "+-*/^()":
            tokens.append(_Token("op", ch, offset + i))
            i += 1
        elif ch == ".":
            raise ParseError(offset + i, ParseErrorKind.SYNTAX, "floating literals are not allowed")
        else:
            raise ParseError(offset + i, ParseErrorKind.SYNTAX, f"unexpected character {ch!r}")
    tokens.append(_Token("end", "", offset + len(text)))
    return tokens


class _PolyParser:
    def __init__(self, text: str, allowed: Sequence[str], offset: int = 0) -> None:
        self.tokens = _tokenize(text, offset)
        self.index = 0
        self.allowed = tuple(allowed)

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        token = self.current
        self.index += 1
        return token

    def accept(self, op: str) -> bool:
        if self.current.kind == "op" and self.current.text == op:
            self.index += 1
            return True
        return False

    def fail(self, message: str, kind: ParseErrorKind = ParseErrorKind.SYNTAX, token: Optional[_Token] = None) -> None:
        raise ParseError((token or self.current).pos, kind, message)

    def parse(self) -> Polynomial:
        poly = self.expr()
        if self.current.kind != "end":
            self.fail(f"unexpected {self.current.text!r}; implicit multiplication is not allowed")
        return poly

    def expr(self) -> Polynomial:
        negate = False
        if self.accept("-"):
            negate = True
        else:
            self.accept("+")
        result = self.term()
        if negate:
            result = -result
        while True:
            if self.accept("+"):
                result = result + self.term()
            elif self.accept("-"):
                result = result - self.term()
            else:
                return result

    def term(self) -> Polynomial:
        result = self.factor()
        while self.accept("*"):
            result = result * self.factor()
        return result

    def factor(self) -> Polynomial:
        base = self.base()
        if self.accept("^"):
            token = self.current
            if token.kind == "op" and token.text in "-(":
                self.fail("exponent must be a natural number", ParseErrorKind.NON_NATURAL_EXPONENT)
            if token.kind != "num":
                self.fail("expected a natural exponent")
            self.advance()
            if self.current.kind == "op" and self.current.text == "/":
                self.fail("exponent must be a natural number", ParseErrorKind.NON_NATURAL_EXPONENT, token)
            return base ** int(token.text)
        return base

    def base(self) -> Polynomial:
        token = self.current
        if token.kind == "num":
            self.advance()
            numerator = int(token.text)
            if self.accept("/"):
                denom = self.current
                if denom.kind != "num":
                    self.fail("expected a positive integer denominator")
                self.advance()
                if int(denom.text) == 0:
                    self.fail("zero denominator", token=denom)
                return Polynomial.constant(Fraction(numerator, int(denom.text)))
            return Polynomial.constant(numerator)
        if token.kind == "var":
            if token.text not in self.allowed:
                self.fail(f"unknown variable {token.text!r}", ParseErrorKind.UNKNOWN_VARIABLE)
            self.advance()
            return Polynomial.var(token.text)
        if self.accept("("):
            inner = self.expr()
            if not self.accept(")"):
                self.fail("expected ')'")
            return inner
        if token.kind == "end":
            self.fail("unexpected end of input")
        self.fail(f"unexpected {token.text!r}")


def parse_poly(text: str, allowed: Sequence[str] = VARIABLES) -> Polynomial:
    return _PolyParser(text, allowed).parse()


def parse_rational(text: str, offset: int = 0) -> Fraction:
    body = text.strip()
    lead = offset + (len(text) - len(text.lstrip()))
    sign = 1
    i = 0
    if body[:1] in "+-" and body:
        sign = -1 if body[0] == "-" else 1
        i = 1
    num_start = i
    while i < len(body) and body[i].isdigit():
        i += 1
    if i == num_start:
        raise ParseError(lead + i, ParseErrorKind.SYNTAX, f"expected an integer in {text!r}")
    numerator = int(body[num_start:i])
    denominator = 1
    if i < len(body) and body[i] == "/":
        i += 1
        den_start = i
        while i < len(body) and body[i].isdigit():
            i += 1
        if i == den_start:
            raise ParseError(lead + i, ParseErrorKind.SYNTAX, "expected a positive integer denominator")
        denominator = int(body[den_start:i])
        if denominator == 0:
            raise ParseError(lead + den_start, ParseErrorKind.SYNTAX, "zero denominator")
    if i != len(body):
        raise ParseError(lead + i, ParseErrorKind.SYNTAX, f"unexpected {body[i]!r}")
    return sign * Fraction(numerator, denominator)


def parse_point(text: str, dim: Optional[int] = None) -> Tuple[Fraction, ...]:
    values = []
    offset = 0
    for chunk in text.split(","):
        values.append(parse_rational(chunk, offset))
        offset += len(chunk) + 1
    if dim is not None and len(values) != dim:
        raise ParseError(0, ParseErrorKind.SYNTAX, f"expected {dim} coordinates, got {len(values)}")
    return tuple(values)


def parse_map_def(text: str, name: str = "custom") -> PolyMap:
    """Parse "P1;P2[;P3]" into a map over (x, y) or (x, y, z)."""
    chunks = text.split(";")
    dim = len(chunks)
    if dim not in (2, 3):
        raise ParseError(0, ParseErrorKind.SYNTAX, f"map definition needs 2 or 3 components, got {dim}")
    allowed = VARIABLES[:dim]
    components = []
    offset = 0
    for chunk in chunks:
        components.append(_PolyParser(chunk, allowed, offset).parse())
        offset += len(chunk) + 1
    return PolyMap(name, tuple(components), allowed)


def format_rational(value: Fraction) -> str:
    """Lowest-terms "n/d" with a positive denominator, integers included."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def _format_coefficient(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def _format_monomial(exponent: Tuple[int, int, int]) -> str:
    factors = []
    for name, k in zip(VARIABLES, exponent):
        if k == 1:
            factors.append(name)
        elif k:
            factors.append(f"{name}^{k}")
    return "*".join(factors)


def print_canonical(f: Polynomial) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for exponent, coeff in f.items():
        monomial = _format_monomial(exponent)
        magnitude = abs(coeff)
        if not monomial:
            body = _format_coefficient(magnitude)
        elif magnitude == 1:
            body = monomial
        else:
            body = f"{_format_coefficient(magnitude)}*{monomial}"
        if not parts:
            parts.append(f"-{body}" if coeff < 0 else body)
        else:
            parts.append(f"- {body}" if coeff < 0 else f"+ {body}")
    return " ".join(parts)
