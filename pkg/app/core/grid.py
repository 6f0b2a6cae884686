"""
Rational grids used by the witness search, the spot checks and the scanner.

Row-major order everywhere: the outer loop runs over x ascending, the inner
loop over y ascending.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Tuple

from app.core.exceptions import ParseError, ParseErrorKind

RationalPoint = Tuple[Fraction, Fraction]


def _axis(lo: Fraction, hi: Fraction, step: Fraction) -> List[Fraction]:
    if step <= 0:
        return [lo]
    values = []
    current = lo
    while current <= hi:
        values.append(current)
        current += step
    return values


def _rationals(text: str) -> List[Fraction]:
    values = []
    offset = 0
    for chunk in text.split(","):
        try:
            values.append(Fraction(chunk.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(offset, ParseErrorKind.SYNTAX, f"bad rational {chunk.strip()!r}: {exc}")
        offset += len(chunk) + 1
    return values


@dataclass(frozen=True)
class GridSpec:
    """Axis-aligned rational grid over [x0, x1] x [y0, y1]."""

    x0: Fraction
    x1: Fraction
    y0: Fraction
    y1: Fraction
    x_step: Fraction
    y_step: Fraction

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """Parse "x0,x1,y0,y1,step"; a step of 0 collapses each axis to its lower bound."""
        values = _rationals(text)
        if len(values) != 5:
            raise ParseError(0, ParseErrorKind.SYNTAX, f"grid needs 5 values, got {len(values)}")
        x0, x1, y0, y1, step = values
        if x1 < x0 or y1 < y0 or step < 0:
            raise ParseError(0, ParseErrorKind.SYNTAX, "grid bounds must be ordered and the step non-negative")
        return cls(x0, x1, y0, y1, step, step)

    @classmethod
    def from_rectangle(cls, text: str, steps: int) -> "GridSpec":
        """Grid over "x0,x1,y0,y1" with `steps` intervals per axis; 0 steps is the single node (x0, y0)."""
        values = _rationals(text)
        if len(values) != 4:
            raise ParseError(0, ParseErrorKind.SYNTAX, f"rectangle needs 4 values, got {len(values)}")
        x0, x1, y0, y1 = values
        if x1 < x0 or y1 < y0 or steps < 0:
            raise ParseError(0, ParseErrorKind.SYNTAX, "rectangle bounds must be ordered and steps non-negative")
        if not steps:
            return cls(x0, x0, y0, y0, Fraction(0), Fraction(0))
        return cls(x0, x1, y0, y1, (x1 - x0) / steps, (y1 - y0) / steps)

    def xs(self) -> List[Fraction]:
        return _axis(self.x0, self.x1, self.x_step)

    def ys(self) -> List[Fraction]:
        return _axis(self.y0, self.y1, self.y_step)

    def points(self) -> Iterator[RationalPoint]:
        ys = self.ys()
        for x in self.xs():
            for y in ys:
                yield (x, y)


@dataclass(frozen=True)
class LiftGrid:
    """Cube of target values (u, v, w), the same values on each axis."""

    values: Tuple[Fraction, ...]

    @classmethod
    def parse(cls, text: str) -> "LiftGrid":
        return cls(tuple(_rationals(text)))

    def points(self) -> Iterator[Tuple[Fraction, Fraction, Fraction]]:
        for u in self.values:
            for v in self.values:
                for w in self.values:
                    yield (u, v, w)
