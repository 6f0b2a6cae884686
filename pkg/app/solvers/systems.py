"""
Certified real solving of zero-dimensional bivariate systems.

The solver eliminates y after a shear x <- x + s*y. Roots of the square-free
eliminant split in two groups:

* roots shared with gcd(lc_y f, lc_y g): rational by requirement, solved on
  the specialised univariate pair;
* the rest: each carries exactly one solution y = -r0(x)/r1(x), read off the
  last degree-one element r1*y + r0 of the subresultant sequence.

Roots where r1 also vanishes sit under a repeated solution or under several
solutions stacked on one vertical line. When they are rational they join the
first group and are solved on the specialised pair, with the multiplicity
left unknown wherever the Jacobian vanishes. A shear is rejected only when a
real root of either group is irrational; the next one is tried.
"""
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from itertools import count
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from app.algebra import bridge
from app.algebra.interval import Box
from app.algebra.poly import PolyMap, Polynomial, x as var_x, y as var_y
from app.core.config import settings
from app.core.exceptions import (
    ArityError,
    CertificationStalledError,
    IneligibleMapError,
    NonZeroDimensionalError,
    PinchukError,
)
from app.solvers.realroots import IsolatingInterval, count_real_roots, isolate_roots, refine

logger = logging.getLogger(__name__)

System = Tuple[Polynomial, Polynomial]
RationalPoint = Tuple[Fraction, Fraction]
XY = ("x", "y")


class FiberMode(str, Enum):
    EXACT = "exact"
    APPROXIMATE = "approximate"


class Multiplicity(str, Enum):
    SIMPLE = "simple"
    UNKNOWN = "unknown"


def _in(p: Polynomial, vars: Sequence[str]) -> Polynomial:
    """Re-declare p over exactly `vars` (its support must fit)."""
    return Polynomial(p.terms, vars)


# ----------------------------------------------------------------------
# locators: how a solution box is produced at a requested precision
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class _ProjectedRoot:
    """Solution over an isolated root of the generic eliminant, y = -r0/r1."""

    root: IsolatingInterval
    r0: Polynomial
    r1: Polynomial
    shear: int

    def box(self) -> Optional[Box]:
        xs = self.root.interval
        if xs.is_point:
            y0 = -self.r0.eval_exact((xs.lo,)) / self.r1.eval_exact((xs.lo,))
            return Box.from_point((xs.lo + self.shear * y0, y0))
        den = self.r1.eval_interval(Box((xs,)))
        if den.contains_zero():
            return None
        ys = -(self.r0.eval_interval(Box((xs,))) / den)
        return Box((xs + self.shear * ys, ys))

    def halve(self) -> "_ProjectedRoot":
        return replace(self, root=refine(self.root, self.root.interval.width / 2))


@dataclass(frozen=True)
class _SpecialRoot:
    """Solution over a rational x0 where both leading coefficients may vanish."""

    x0: Fraction
    root: IsolatingInterval
    shear: int

    def box(self) -> Optional[Box]:
        ys = self.root.interval
        return Box((self.x0 + self.shear * ys, ys))

    def halve(self) -> "_SpecialRoot":
        return replace(self, root=refine(self.root, self.root.interval.width / 2))


_Locator = Union[_ProjectedRoot, _SpecialRoot]


def _settle(locator: _Locator, width: Optional[Fraction], max_depth: int) -> Tuple[Box, _Locator]:
    for _ in range(max_depth + 1):
        box = locator.box()
        if box is not None and (width is None or box.width <= width):
            return box, locator
        locator = locator.halve()
    raise CertificationStalledError(f"box refinement exceeded depth {max_depth}")


@dataclass(frozen=True)
class SolutionBox:
    """A box holding exactly one real solution of `system`."""

    box: Box
    system: System
    multiplicity_note: Multiplicity = Multiplicity.SIMPLE
    locator: Optional[_Locator] = field(default=None, compare=False, repr=False)

    @property
    def is_exact(self) -> bool:
        return self.box.is_point

    @property
    def point(self) -> RationalPoint:
        """The solution when exact, else the box midpoint."""
        return self.box.midpoint

    def contains(self, point: Sequence[Fraction]) -> bool:
        return self.box.contains(point)

    def refine(self, width: Fraction, max_depth: int = None) -> "SolutionBox":
        if self.is_exact or self.box.width <= width or self.locator is None:
            return self
        box, locator = _settle(self.locator, width, max_depth or settings.refine_max_depth)
        return replace(self, box=box, locator=locator)

    def __str__(self) -> str:
        if self.is_exact:
            return f"({self.box[0].lo}, {self.box[1].lo})"
        return str(self.box)


@dataclass(frozen=True)
class FiberResult:
    target: RationalPoint
    solutions: Tuple[SolutionBox, ...]
    mode: FiberMode

    @property
    def count(self) -> int:
        return len(self.solutions)

    @property
    def is_empty(self) -> bool:
        return not self.solutions


# ----------------------------------------------------------------------
# elimination
# ----------------------------------------------------------------------
def resultant(f: Polynomial, g: Polynomial, var: str = "y", cross_check: bool = False) -> Polynomial:
    """
    Sylvester resultant of f and g with respect to `var`, f's rows first.

    `cross_check` recomputes small cases (Sylvester matrix of size <= 8) as an
    explicit determinant and insists both agree.
    """
    if f.degree(var) < 1 and g.degree(var) < 1:
        raise ArityError(f"both polynomials are constant in {var}")
    result = bridge.resultant(f, g, var)
    if cross_check and f.degree(var) + g.degree(var) <= 8 and min(f.degree(var), g.degree(var)) >= 0:
        expected = bridge.sylvester_det(f, g, var)
        if expected != result:
            raise PinchukError(f"resultant mismatch: PRS gave {result}, Sylvester determinant gave {expected}")
    return result


def shear_sequence() -> Iterator[int]:
    """0, 1, -1, 2, -2, ..."""
    yield 0
    for k in count(1):
        yield k
        yield -k


def _sheared(f: Polynomial, s: int) -> Polynomial:
    f = f.with_vars(XY)
    if not s:
        return f
    return f.compose([var_x() + s * var_y(), var_y()]).with_vars(XY)


def _system_jacobian_note(f: Polynomial, g: Polynomial, box: Box) -> Multiplicity:
    rows = [[f.partial(v) for v in XY], [g.partial(v) for v in XY]]
    jac = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    jac = jac.with_vars(XY)
    if box.is_point:
        return Multiplicity.SIMPLE if jac.eval_exact(box.midpoint) else Multiplicity.UNKNOWN
    return Multiplicity.UNKNOWN if jac.eval_interval(box).contains_zero() else Multiplicity.SIMPLE


def _rational_real_roots(p: Polynomial) -> Optional[List[Fraction]]:
    """Real roots of p in x when all of them are rational; None otherwise."""
    roots: List[Fraction] = []
    for factor, _ in bridge.factor_list(p):
        if factor.is_constant():
            continue
        if factor.degree("x") == 1:
            roots.append(-factor.coeff_in("x", 0).constant_value() / factor.coeff_in("x", 1).constant_value())
        elif count_real_roots(_in(factor, ("x",))):
            return None
    return roots


def _locate(f: Polynomial, g: Polynomial, s: int) -> Optional[List[_Locator]]:
    """All solution locators for the shear s, or None when s does not separate."""
    fs, gs = _sheared(f, s), _sheared(g, s)
    if fs.degree("y") < 1 or gs.degree("y") < 1:
        return None
    eliminant = resultant(fs, gs, "y")
    if eliminant.is_zero():
        return None
    if eliminant.is_constant():
        return []
    squarefree = bridge.squarefree_part(eliminant)
    common_lc = bridge.gcd(fs.leading_coeff_in("y"), gs.leading_coeff_in("y"))
    special = bridge.gcd(squarefree, common_lc)
    logger.info("shear %d: eliminant degree %d, special part degree %d", s, eliminant.degree("x"), special.total_degree())

    special_roots: List[Fraction] = []
    if not special.is_constant():
        roots = _rational_real_roots(special)
        if roots is None:
            logger.warning("shear %d rejected: irrational root shared by the leading coefficients", s)
            return None
        special_roots.extend(roots)

    locators: List[_Locator] = []
    generic = bridge.exquo(squarefree, special) if not special.is_constant() else squarefree
    if not generic.is_constant():
        linear = [p for p in bridge.subresultants(fs, gs, "y") if p.degree("y") == 1]
        if linear:
            r1, r0 = linear[-1].coeff_in("y", 1), linear[-1].coeff_in("y", 0)
            unseparated = bridge.gcd(generic, r1)
        else:
            unseparated = generic
        if not unseparated.is_constant():
            # r1 vanishes over repeated or stacked solutions; rational ones are solved by specialization
            roots = _rational_real_roots(unseparated)
            if roots is None:
                logger.warning("shear %d rejected: projection is not separating", s)
                return None
            logger.info("shear %d: %d rational x-values solved by specialization", s, len(roots))
            special_roots.extend(roots)
            generic = bridge.exquo(generic, unseparated)
        if not generic.is_constant():
            exact = generic.degree("x") <= settings.rational_root_degree_limit
            for root in isolate_roots(_in(generic, ("x",)), exact_rationals=exact):
                locators.append(_ProjectedRoot(root, _in(r0, ("x",)), _in(r1, ("x",)), s))

    for x0 in special_roots:
        h = bridge.gcd(fs.specialize("x", x0), gs.specialize("x", x0))
        if h.is_constant():
            continue
        for root in isolate_roots(_in(h, ("y",)), exact_rationals=True):
            locators.append(_SpecialRoot(x0, root, s))
    return locators


def _make_disjoint(boxes: List[Box], locators: List[_Locator], max_depth: int) -> List[Box]:
    for _ in range(max_depth + 1):
        clash = next(
            ((i, j) for i in range(len(boxes)) for j in range(i + 1, len(boxes)) if not boxes[i].disjoint(boxes[j])),
            None,
        )
        if clash is None:
            return boxes
        for k in clash:
            boxes[k], locators[k] = _settle(locators[k].halve(), None, max_depth)
    raise CertificationStalledError("solution boxes could not be separated")


def solve_bivariate(f: Polynomial, g: Polynomial, max_shears: int = None, max_depth: int = None) -> List[SolutionBox]:
    """
    Every real solution of {f = 0, g = 0} in a certified isolating box.

    Raises NonZeroDimensionalError on a common factor and
    CertificationStalledError when no shear separates or refinement stalls.
    """
    max_shears = max_shears or settings.shear_max_tries
    max_depth = max_depth or settings.refine_max_depth
    f, g = f.with_vars(XY), g.with_vars(XY)
    if (f.is_constant() and not f.is_zero()) or (g.is_constant() and not g.is_zero()):
        return []
    if f.is_zero() or g.is_zero():
        raise NonZeroDimensionalError("the system contains the zero polynomial")
    common = bridge.gcd(f, g)
    if not common.is_constant():
        raise NonZeroDimensionalError(f"common factor {common}")

    shears = shear_sequence()
    for _ in range(max_shears):
        s = next(shears)
        located = _locate(f, g, s)
        if located is None:
            continue
        boxes, locators = [], []
        for locator in located:
            box, locator = _settle(locator, None, max_depth)
            boxes.append(box)
            locators.append(locator)
        boxes = _make_disjoint(boxes, locators, max_depth)
        solutions = []
        for box, locator in zip(boxes, locators):
            if not (f.eval_interval(box).contains_zero() and g.eval_interval(box).contains_zero()):
                raise CertificationStalledError(f"box {box} fails the inclusion check")
            solutions.append(SolutionBox(box, (f, g), _system_jacobian_note(f, g, box), locator))
        solutions.sort(key=lambda sol: (sol.box[0].lo, sol.box[1].lo))
        logger.info("solved with shear %d: %d real solutions", s, len(solutions))
        return solutions
    raise CertificationStalledError(f"no separating shear among the first {max_shears}")


# ----------------------------------------------------------------------
# fibers
# ----------------------------------------------------------------------
def fiber_system(m: PolyMap, target: Sequence[Fraction]) -> System:
    if len(m.components) != 2 or m.domain_vars != XY:
        raise ArityError(f"fibers need a planar map, {m.name!r} has {len(m.components)} components")
    a, b = (Fraction(t) for t in target)
    return m.components[0] - a, m.components[1] - b


def fiber(m: PolyMap, target: Sequence[Fraction], mode: FiberMode = FiberMode.EXACT) -> FiberResult:
    """Preimage of a rational target: complete and certified in exact mode, a lower bound otherwise."""
    target = (Fraction(target[0]), Fraction(target[1]))
    mode = FiberMode(mode)
    if mode is FiberMode.APPROXIMATE:
        from app.solvers.newton import approximate_fiber

        return approximate_fiber(m, target)
    if m.max_degree() > settings.exact_degree_limit:
        raise IneligibleMapError(
            f"map {m.name!r} has degree {m.max_degree()} > {settings.exact_degree_limit}; use approximate mode"
        )
    f, g = fiber_system(m, target)
    return FiberResult(target, tuple(solve_bivariate(f, g)), FiberMode.EXACT)


def staged_fiber(outer: PolyMap, inner: PolyMap, target: Sequence[Fraction]) -> FiberResult:
    """Approximate fiber of outer∘inner: solve outer = target, then inner = w for each w."""
    from app.solvers.newton import staged_fiber as _staged

    return _staged(outer, inner, (Fraction(target[0]), Fraction(target[1])))
