"""
Global sign certificates for bivariate polynomials on the real plane.

Two routes:

* sum of squares: an exact identity g = sum(h_i^2) plus an exact solve of
  the parts' common zeros (empty means strictly positive);
* distance-critical points: the real zero set of g, when nonempty, has a
  point closest to any center c, and there (x - c1) g_y - (y - c2) g_x = 0.
  If that system with g has no real solution, g never vanishes.
"""
import logging
import random
from enum import Enum
from fractions import Fraction
from itertools import islice
from typing import Iterator, List, Optional, Sequence, Tuple

from app.algebra.poly import Polynomial, x, y
from app.core.config import settings
from app.core.exceptions import (
    DegenerateCenterError,
    MissingCertificateError,
    NonZeroDimensionalError,
    ReplayMismatchError,
)
from app.schemas import BoxRecord, CertMethod, Sign, SignCertificate, Verdict
from app.services.maps import map_service
from app.solvers.systems import SolutionBox, solve_bivariate

logger = logging.getLogger(__name__)

XY = ("x", "y")


class SignMethod(str, Enum):
    AUTO = "auto"
    SOS = "sos"
    DISTANCE = "distance"


def verify_sos(g: Polynomial, parts: Sequence[Polynomial]) -> bool:
    """True iff g equals the sum of the squared parts exactly."""
    total = Polynomial.zero()
    for part in parts:
        total = total + part * part
    return total == g


def center_sequence(seed: int) -> Iterator[Tuple[Fraction, Fraction]]:
    """(0, 0) first, then small rationals drawn from a seeded generator."""
    yield Fraction(0), Fraction(0)
    rng = random.Random(seed)
    while True:
        yield (
            Fraction(rng.randint(-8, 8), rng.randint(1, 8)),
            Fraction(rng.randint(-8, 8), rng.randint(1, 8)),
        )


def distance_system(g: Polynomial, center: Tuple[Fraction, Fraction]) -> Tuple[Polynomial, Polynomial]:
    c1, c2 = center
    lagrange = (x() - c1) * g.partial("y") - (y() - c2) * g.partial("x")
    return g.with_vars(XY), lagrange.with_vars(XY)


def _sign(value: Fraction) -> Sign:
    return Sign.POSITIVE if value > 0 else Sign.NEGATIVE


def _try_center(g: Polynomial, center: Tuple[Fraction, Fraction], seed: int) -> Optional[SignCertificate]:
    value = g.eval_exact(center)
    if value == 0:
        return SignCertificate(
            polynomial=g,
            verdict=Verdict.VANISHES,
            witness=BoxRecord.from_point(center),
            method=CertMethod.DISTANCE_CRITICAL,
            seed=seed,
            center=center,
        )
    if g.is_constant():
        return SignCertificate(
            polynomial=g,
            verdict=Verdict.NEVER_VANISHES,
            sign=_sign(value),
            method=CertMethod.DISTANCE_CRITICAL,
            seed=seed,
            center=center,
        )
    system = distance_system(g, center)
    if system[1].is_zero():
        logger.warning("center %s is degenerate: the Lagrange condition vanishes identically", center)
        return None
    try:
        solutions = solve_bivariate(*system)
    except NonZeroDimensionalError as exc:
        logger.warning("center %s gives a positive-dimensional critical set: %s", center, exc)
        return None
    if not solutions:
        return SignCertificate(
            polynomial=g,
            verdict=Verdict.NEVER_VANISHES,
            sign=_sign(value),
            method=CertMethod.DISTANCE_CRITICAL,
            seed=seed,
            center=center,
            auxiliary_system=system,
        )
    return SignCertificate(
        polynomial=g,
        verdict=Verdict.VANISHES,
        witness=BoxRecord.from_solution(solutions[0]),
        method=CertMethod.DISTANCE_CRITICAL,
        seed=seed,
        center=center,
        auxiliary_system=system,
    )


def curve_emptiness(g: Polynomial, seed: int = 0, max_centers: int = None) -> SignCertificate:
    max_centers = max_centers or settings.curve_max_centers
    if g.is_zero():
        raise NonZeroDimensionalError("the zero polynomial vanishes everywhere")
    g = g.with_vars(XY)
    for center in islice(center_sequence(seed), max_centers):
        certificate = _try_center(g, center, seed)
        if certificate is not None:
            logger.info("curve emptiness with center %s: %s", center, certificate.verdict.value)
            return certificate
    raise DegenerateCenterError(f"all {max_centers} centers were degenerate for {g}")


def _vanishes_at(part: Polynomial, solution: SolutionBox) -> Optional[bool]:
    """Whether part is zero at the solution; None when refinement cannot tell."""
    for _ in range(settings.refine_max_depth):
        value = part.eval_interval(solution.box)
        if not value.contains_zero():
            return False
        if solution.is_exact:
            return True
        refined = solution.refine(solution.box.width / 2)
        if refined.box.width >= solution.box.width:
            return None
        solution = refined
    return None


def _common_zeros(parts: List[Polynomial]) -> Optional[List[SolutionBox]]:
    """Real common zeros of all parts: the first two are solved, the rest filter."""
    try:
        candidates = solve_bivariate(parts[0], parts[1])
    except NonZeroDimensionalError as exc:
        logger.warning("SOS parts share a factor (%s); falling back to distance-critical points", exc)
        return None
    common = []
    for solution in candidates:
        decided = [_vanishes_at(p, solution) for p in parts[2:]]
        if None in decided:
            logger.warning("cannot decide whether the remaining SOS parts vanish at %s", solution)
            return None
        if all(decided):
            common.append(solution)
    return common


def _sos_certificate(g: Polynomial, parts: List[Polynomial], seed: int) -> Optional[SignCertificate]:
    positive = SignCertificate(polynomial=g, verdict=Verdict.NEVER_VANISHES, sign=Sign.POSITIVE,
                               method=CertMethod.SOS, seed=seed, sos_parts=parts)
    if any(p.is_constant() and p != 0 for p in parts):
        return positive
    varying = [p for p in parts if not p.is_constant()]
    if len(varying) < 2:
        # a single square vanishes on a curve unless the part is constant
        return None
    common = _common_zeros(varying)
    if common is None:
        return None
    if common:
        return SignCertificate(
            polynomial=g,
            verdict=Verdict.VANISHES,
            witness=BoxRecord.from_solution(common[0]),
            method=CertMethod.SOS,
            seed=seed,
            sos_parts=parts,
        )
    return positive


def nonvanishing_sign(
    g: Polynomial,
    seed: int = 0,
    sos_parts: Optional[Sequence[Polynomial]] = None,
    method: SignMethod = SignMethod.AUTO,
) -> SignCertificate:
    """Certify the global sign of g, preferring a known SOS decomposition."""
    method = SignMethod(method)
    g = g.with_vars(XY)
    if method is not SignMethod.DISTANCE:
        parts = list(sos_parts) if sos_parts is not None else map_service.sos_registry().get(g)
        if parts is None:
            if method is SignMethod.SOS:
                raise MissingCertificateError(f"no sum-of-squares decomposition known for {g}")
        elif not verify_sos(g, parts):
            if method is SignMethod.SOS:
                raise MissingCertificateError("the supplied parts do not square-sum to the polynomial")
            logger.warning("SOS identity failed; falling back to distance-critical points")
        else:
            certificate = _sos_certificate(g, [p.with_vars(XY) for p in parts], seed)
            if certificate is not None:
                return certificate
            if method is SignMethod.SOS:
                raise MissingCertificateError("the SOS parts have a positive-dimensional common zero set")
    return curve_emptiness(g, seed)


def replay_sign_certificate(certificate: SignCertificate) -> SignCertificate:
    """Re-derive a certificate from its recorded inputs; raises on any difference."""
    g = certificate.polynomial.with_vars(XY)
    if certificate.method is CertMethod.SOS:
        if not certificate.sos_parts or not verify_sos(g, certificate.sos_parts):
            raise ReplayMismatchError("recorded SOS parts do not reproduce the polynomial")
        fresh = _sos_certificate(g, [p.with_vars(XY) for p in certificate.sos_parts], certificate.seed)
    else:
        if certificate.center is None:
            raise ReplayMismatchError("distance-critical certificate without a center")
        center = (Fraction(certificate.center[0]), Fraction(certificate.center[1]))
        if certificate.auxiliary_system is not None:
            system = distance_system(g, center)
            if tuple(certificate.auxiliary_system) != system:
                raise ReplayMismatchError("auxiliary system differs from the one derived from the center")
        fresh = _try_center(g, center, certificate.seed)
    if fresh is None or fresh.verdict is not certificate.verdict or fresh.sign is not certificate.sign:
        raise ReplayMismatchError(f"replayed verdict differs from recorded {certificate.verdict.value}")
    return fresh
