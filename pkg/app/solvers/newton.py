"""
Approximate fibers by vectorised damped Newton.

Counts produced here are lower bounds and nothing is certified; exact work
lives in `app.solvers.systems`.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from app.algebra.interval import Box
from app.algebra.poly import PolyMap, Polynomial
from app.core.config import settings
from app.solvers.systems import FiberMode, FiberResult, Multiplicity, SolutionBox, fiber_system

logger = logging.getLogger(__name__)

XY = ("x", "y")
DAMPING_STEPS = 10


@dataclass(frozen=True)
class _Compiled:
    """A bivariate polynomial as exponent and coefficient arrays."""

    ex: np.ndarray
    ey: np.ndarray
    coeffs: np.ndarray

    @classmethod
    def of(cls, p: Polynomial) -> "_Compiled":
        items = list(p.terms.items())
        if not items:
            return cls(np.zeros(0, dtype=int), np.zeros(0, dtype=int), np.zeros(0))
        return cls(
            np.array([e[0] for e, _ in items]),
            np.array([e[1] for e, _ in items]),
            np.array([float(c) for _, c in items]),
        )

    def __call__(self, X: np.ndarray, Y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Values and the matching magnitude sum(|c| |x|^i |y|^j)."""
        if not self.coeffs.size:
            zeros = np.zeros_like(X)
            return zeros, zeros
        mon = np.power(X[:, None], self.ex) * np.power(Y[:, None], self.ey)
        return mon @ self.coeffs, np.abs(mon) @ np.abs(self.coeffs)


class PlanarSystem:
    """m(x, y) = target for a planar map, ready for batched evaluation."""

    def __init__(self, m: PolyMap, target: Sequence[float]) -> None:
        if len(m.components) != 2:
            raise ValueError(f"planar system needs 2 components, {m.name!r} has {len(m.components)}")
        self.components = [_Compiled.of(c) for c in m.components]
        self.partials = [[_Compiled.of(c.partial(v)) for v in XY] for c in m.components]
        self.target = np.asarray(target, dtype=float)

    def residual(self, X: np.ndarray, Y: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Residuals r1, r2 and the scaled residual max_i |r_i| / (1 + magnitude_i)."""
        (v1, s1), (v2, s2) = (c(X, Y) for c in self.components)
        r1, r2 = v1 - self.target[0], v2 - self.target[1]
        with np.errstate(invalid="ignore", over="ignore"):
            scaled = np.maximum(
                np.abs(r1) / (1 + s1 + abs(self.target[0])),
                np.abs(r2) / (1 + s2 + abs(self.target[1])),
            )
        return r1, r2, scaled

    def jacobian(self, X: np.ndarray, Y: np.ndarray) -> Tuple[np.ndarray, ...]:
        (a, _), (b, _) = (d(X, Y) for d in self.partials[0])
        (c, _), (d, _) = (d(X, Y) for d in self.partials[1])
        return a, b, c, d


def _newton(system: PlanarSystem, starts: np.ndarray, max_iter: int, tol: float) -> Tuple[np.ndarray, np.ndarray]:
    """Run damped Newton from every start; returns converged points and their |det J| ratios."""
    X, Y = starts[:, 0].copy(), starts[:, 1].copy()
    active = np.ones(len(X), dtype=bool)
    converged = np.zeros(len(X), dtype=bool)
    with np.errstate(all="ignore"):
        for _ in range(max_iter):
            idx = np.flatnonzero(active)
            if not idx.size:
                break
            x, y = X[idx], Y[idx]
            r1, r2, scaled = system.residual(x, y)
            done = scaled <= tol
            converged[idx[done]] = True
            a, b, c, d = system.jacobian(x, y)
            det = a * d - b * c
            dead = ~np.isfinite(scaled) | ~np.isfinite(det) | (det == 0)
            active[idx[done | dead]] = False
            step = ~(done | dead)
            if not step.any():
                continue
            idx, x, y = idx[step], x[step], y[step]
            r1, r2, a, b, c, d, det = r1[step], r2[step], a[step], b[step], c[step], d[step], det[step]
            dx = (-r1 * d + r2 * b) / det
            dy = (-r2 * a + r1 * c) / det
            norm = np.hypot(r1, r2)
            accepted = np.zeros(len(idx), dtype=bool)
            new_x, new_y = x + dx, y + dy
            t = 1.0
            for _ in range(DAMPING_STEPS):
                tx, ty = x + t * dx, y + t * dy
                t1, t2, _ = system.residual(tx, ty)
                better = ~accepted & (np.hypot(t1, t2) < norm)
                new_x[better], new_y[better] = tx[better], ty[better]
                accepted |= better
                if accepted.all():
                    break
                t /= 2
            stalled = ~accepted
            new_x[stalled], new_y[stalled] = x[stalled] + t * dx[stalled], y[stalled] + t * dy[stalled]
            X[idx], Y[idx] = new_x, new_y
        r1, r2, scaled = system.residual(X, Y)
        converged |= scaled <= tol
        a, b, c, d = system.jacobian(X, Y)
        ratio = np.abs(a * d - b * c) / (np.abs(a * d) + np.abs(b * c) + 1e-300)
    failed = int((~converged).sum())
    if failed:
        logger.debug("%d of %d Newton starts did not converge", failed, len(X))
    points = np.column_stack([X, Y])[converged]
    return points, ratio[converged]


def _dedupe(points: np.ndarray, ratios: np.ndarray, tol: float, singular_tol: float) -> List[Tuple[float, float, bool]]:
    """Greedy clustering in lexicographic order; near-singular points merge at the looser tolerance."""
    kept: List[Tuple[float, float, bool]] = []
    order = np.lexsort((points[:, 1], points[:, 0])) if len(points) else []
    for i in order:
        px, py = points[i]
        singular = ratios[i] < 1e-6
        radius = singular_tol if singular else tol
        if any(np.hypot(px - kx, py - ky) <= max(radius, singular_tol if ks else tol) for kx, ky, ks in kept):
            continue
        kept.append((float(px), float(py), bool(singular)))
    return kept


def _start_grid(size: int, radius: float) -> np.ndarray:
    axis = np.linspace(-radius, radius, size)
    gx, gy = np.meshgrid(axis, axis, indexing="ij")
    return np.column_stack([gx.ravel(), gy.ravel()])


def approximate_roots(
    m: PolyMap,
    target: Sequence[float],
    grid_size: Optional[int] = None,
    radius: Optional[float] = None,
) -> List[Tuple[float, float, bool]]:
    """Distinct approximate solutions (x, y, near_singular) of m = target, sorted."""
    grid_size = grid_size or settings.newton_grid_size
    radius = radius or settings.newton_grid_radius
    system = PlanarSystem(m, target)
    for attempt_radius in (radius, 10 * radius):
        points, ratios = _newton(system, _start_grid(grid_size, attempt_radius), settings.newton_max_iter, settings.newton_tol)
        found = _dedupe(points, ratios, settings.dedupe_tol, settings.singular_dedupe_tol)
        if found:
            return found
        logger.warning("no Newton start converged for %s = %s within radius %g", m.name, tuple(target), attempt_radius)
    return []


def _point_box(px: float, py: float, system: Tuple[Polynomial, Polynomial]) -> SolutionBox:
    return SolutionBox(Box.from_point((Fraction(px), Fraction(py))), system, Multiplicity.UNKNOWN)


def approximate_fiber(m: PolyMap, target: Tuple[Fraction, Fraction]) -> FiberResult:
    system = fiber_system(m, target)
    found = approximate_roots(m, (float(target[0]), float(target[1])))
    boxes = tuple(_point_box(px, py, system) for px, py, _ in found)
    return FiberResult(target, boxes, FiberMode.APPROXIMATE)


@lru_cache(maxsize=16)
def _composed(outer: PolyMap, inner: PolyMap) -> PolyMap:
    return outer.compose(inner)


def staged_fiber(outer: PolyMap, inner: PolyMap, target: Tuple[Fraction, Fraction]) -> FiberResult:
    """Fiber of outer∘inner through the intermediate fiber of outer."""
    stage_one = approximate_roots(outer, (float(target[0]), float(target[1])))
    logger.info("staged fiber: %d intermediate targets", len(stage_one))
    points: List[Tuple[float, float]] = []
    ratios: List[float] = []
    for wx, wy, _ in stage_one:
        for px, py, singular in approximate_roots(inner, (wx, wy)):
            points.append((px, py))
            ratios.append(0.0 if singular else 1.0)
    found = _dedupe(np.array(points).reshape(-1, 2), np.array(ratios), settings.dedupe_tol, settings.singular_dedupe_tol)
    system = fiber_system(_composed(outer, inner), target)
    boxes = tuple(_point_box(px, py, system) for px, py, _ in found)
    return FiberResult(target, boxes, FiberMode.APPROXIMATE)


def polish(m: PolyMap, target: Sequence[Fraction], point: Sequence[float]) -> Tuple[Fraction, Fraction]:
    """One exact rational Newton step from a float approximation."""
    px, py = Fraction(point[0]), Fraction(point[1])
    r = [c.eval_exact((px, py)) - Fraction(t) for c, t in zip(m.components, target)]
    a, b = (m.components[0].partial(v).eval_exact((px, py)) for v in XY)
    c, d = (m.components[1].partial(v).eval_exact((px, py)) for v in XY)
    det = a * d - b * c
    if not det:
        return px, py
    return px + (-r[0] * d + r[1] * b) / det, py + (-r[1] * a + r[0] * c) / det
