"""
Map registry.

Builds the named planar maps (the BF-Pinchuk map F, the cubic phi, the
non-dense modifier psi, their shifted and composed variants) and the
utilities that combine them.
"""
import logging
from math import comb
from typing import Callable, Dict, List, Optional, Tuple

from app.algebra.poly import PolyMap, Polynomial, jacobian_det, x, y
from app.core.config import settings
from app.core.exceptions import ArityError, UnknownMapError

logger = logging.getLogger(__name__)


def bf_factors() -> Tuple[Polynomial, Polynomial]:
    """q1, q2 with q = -q1*q2."""
    X, Y = x(), y()
    q1 = 4 * X**4 * Y**2 + 8 * X**3 * Y + 4 * X**2 + 2 * X * Y + 1
    q2 = 4 * X**6 * Y**3 + 12 * X**5 * Y**2 + 12 * X**4 * Y + 4 * X**3 * Y**2 + 4 * X**3 + 7 * X**2 * Y + 3 * X + Y
    return q1, q2


def bf_p() -> Polynomial:
    X, Y = x(), y()
    return 4 * X**6 * Y**3 + 12 * X**5 * Y**2 + 12 * X**4 * Y + 4 * X**3 * Y**2 + 4 * X**3 + 5 * X**2 * Y + X + Y


def bf_q() -> Polynomial:
    q1, q2 = bf_factors()
    return -(q1 * q2)


def realize_complex(cpoly: Polynomial, name: str = "realized") -> PolyMap:
    """(Re, Im) of c(x + i*y) for a univariate c with rational coefficients."""
    present = [v for v in cpoly.vars if cpoly.degree(v) > 0]
    if len(present) > 1:
        raise ArityError(f"{cpoly} is not univariate")
    coeffs = cpoly.univariate_coefficients(present[0]) if present else [cpoly.constant_value()]
    X, Y = x(), y()
    re = Polynomial.zero(("x", "y"))
    im = Polynomial.zero(("x", "y"))
    for k, c in enumerate(coeffs):
        if not c:
            continue
        for j in range(k + 1):
            # i^j cycles through 1, i, -1, -i
            term = c * comb(k, j) * X ** (k - j) * Y**j
            if j % 4 == 0:
                re = re + term
            elif j % 4 == 1:
                im = im + term
            elif j % 4 == 2:
                re = re - term
            else:
                im = im - term
    return PolyMap(name, (re, im))


def compose_maps(outer: PolyMap, inner: PolyMap, name: Optional[str] = None) -> PolyMap:
    """outer ∘ inner, expanded."""
    composed = outer.compose(inner, name)
    logger.info("composed %s: component degrees %s", composed.name, [c.total_degree() for c in composed.components])
    return composed


def eligible_for_exact(m: PolyMap) -> bool:
    return m.max_degree() <= settings.exact_degree_limit


def _build_F() -> PolyMap:
    return PolyMap("F", (bf_p(), bf_q()))


def _build_phi() -> PolyMap:
    z = Polynomial.var("z")
    return realize_complex(z**3 - 3 * z, "phi")


def _build_psi() -> PolyMap:
    X, Y = x(), y()
    return PolyMap("psi", ((X * Y**2 + X + Y) * (X - Y), (X * Y + 1) ** 2 + X**2))


def _build_Ftilde() -> PolyMap:
    return PolyMap("Ftilde", (bf_p() + 1, bf_q()))


class MapService:
    """Named map registry; entries are built on first request and cached."""

    def __init__(self) -> None:
        self.builders: Dict[str, Callable[[], PolyMap]] = {
            "F": _build_F,
            "phi": _build_phi,
            "psi": _build_psi,
            "Ftilde": _build_Ftilde,
            "f": lambda: compose_maps(self.get_map("phi"), self.get_map("F"), "f"),
            "ftilde": lambda: compose_maps(self.get_map("psi"), self.get_map("Ftilde"), "ftilde"),
        }
        self._cache: Dict[str, PolyMap] = {}

    def get_map(self, name: str) -> PolyMap:
        if name not in self.builders:
            available = ", ".join(self.builders)
            raise UnknownMapError(f"unknown map {name!r}; available maps: {available}")
        if name not in self._cache:
            self._cache[name] = self.builders[name]()
        return self._cache[name]

    def list_available_maps(self) -> List[str]:
        return list(self.builders)

    def jacobian_sos(self, name: str) -> Optional[List[Polynomial]]:
        """Known sum-of-squares decomposition of det(D map), if any."""
        if name in ("F", "Ftilde"):
            # det(DF) = 2(q1^2 + q2^2) = (q1 + q2)^2 + (q1 - q2)^2
            q1, q2 = bf_factors()
            return [q1 + q2, q1 - q2]
        if name == "psi":
            X, Y = x(), y()
            return [2 * Y + 2 * X * Y**2 + X, X * (2 * Y**2 + 3)]
        return None

    def sos_registry(self) -> Dict[Polynomial, List[Polynomial]]:
        """Decompositions consulted automatically by the sign certifier."""
        psi = self.get_map("psi")
        return {jacobian_det(psi): self.jacobian_sos("psi")}


def builtin(name: str) -> PolyMap:
    return map_service.get_map(name)


# Global map registry
map_service = MapService()
