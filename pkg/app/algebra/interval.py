"""
Closed rational intervals and boxes.

Arithmetic is outward-exact: endpoints are Fractions, so the inclusion
property holds without rounding control.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Tuple, Union

Number = Union[int, Fraction]


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"malformed interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, value: Number) -> "Interval":
        return cls(Fraction(value), Fraction(value))

    @classmethod
    def hull(cls, values: Iterable[Number]) -> "Interval":
        values = [Fraction(v) for v in values]
        return cls(min(values), max(values))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, value: Number) -> bool:
        return self.lo <= value <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def bisect(self) -> Tuple["Interval", "Interval"]:
        mid = self.midpoint
        return Interval(self.lo, mid), Interval(mid, self.hi)

    def __add__(self, other: Union["Interval", Number]) -> "Interval":
        other = _lift(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other: Union["Interval", Number]) -> "Interval":
        return self + (-_lift(other))

    def __rsub__(self, other: Number) -> "Interval":
        return _lift(other) - self

    def __mul__(self, other: Union["Interval", Number]) -> "Interval":
        other = _lift(other)
        products = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Interval(min(products), max(products))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Interval":
        if n == 0:
            return Interval.point(1)
        lo_n, hi_n = self.lo ** n, self.hi ** n
        if n % 2:
            return Interval(lo_n, hi_n)
        if self.lo >= 0:
            return Interval(lo_n, hi_n)
        if self.hi <= 0:
            return Interval(hi_n, lo_n)
        return Interval(Fraction(0), max(lo_n, hi_n))

    def __truediv__(self, other: Union["Interval", Number]) -> "Interval":
        other = _lift(other)
        if other.contains_zero():
            raise ZeroDivisionError(f"interval divisor {other} contains 0")
        return self * Interval(1 / other.hi, 1 / other.lo)

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def _lift(value: Union[Interval, Number]) -> Interval:
    return value if isinstance(value, Interval) else Interval.point(value)


@dataclass(frozen=True)
class Box:
    """Product of intervals, one per variable in (x, y, z) order."""

    intervals: Tuple[Interval, ...]

    @classmethod
    def from_point(cls, point: Iterable[Number]) -> "Box":
        return cls(tuple(Interval.point(v) for v in point))

    @property
    def width(self) -> Fraction:
        return max(iv.width for iv in self.intervals)

    @property
    def midpoint(self) -> Tuple[Fraction, ...]:
        return tuple(iv.midpoint for iv in self.intervals)

    @property
    def is_point(self) -> bool:
        return all(iv.is_point for iv in self.intervals)

    def contains(self, point: Iterable[Number]) -> bool:
        return all(iv.contains(v) for iv, v in zip(self.intervals, point))

    def disjoint(self, other: "Box") -> bool:
        return any(not a.overlaps(b) for a, b in zip(self.intervals, other.intervals))

    def __getitem__(self, index: int) -> Interval:
        return self.intervals[index]

    def __len__(self) -> int:
        return len(self.intervals)

    def __str__(self) -> str:
        return " x ".join(str(iv) for iv in self.intervals)
