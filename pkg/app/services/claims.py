"""
Claim suite: assembles machine-checked reports for the non-injectivity,
surjectivity, non-density and unit-Jacobian-lift results.

Every check runs in isolation; a library error marks that check FAIL with
the error text while the rest of the report still assembles.
"""
import hashlib
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from app.algebra.interval import Box, Interval
from app.algebra.parser import print_canonical
from app.algebra.poly import PolyMap, Polynomial, jacobian_det, x, y
from app.algebra.ratfunc import XYZ, RationalMap, build_G, rf_jacobian_det
from app.core.config import settings
from app.core.exceptions import (
    CertificationStalledError,
    PinchukError,
    ReplayMismatchError,
    UnknownMapError,
    WitnessNotFoundError,
)
from app.core.grid import GridSpec, LiftGrid
from app.schemas import (
    Artifact,
    BoxRecord,
    ChainRuleCertificate,
    CheckResult,
    CheckVerdict,
    ClaimId,
    ClaimReport,
    ClaimReportFile,
    FiberRecord,
    SignCertificate,
    WitnessRecord,
)
from app.services.certify import nonvanishing_sign, replay_sign_certificate, verify_sos
from app.services.maps import compose_maps, eligible_for_exact, map_service
from app.solvers.newton import polish
from app.solvers.realroots import isolate_roots
from app.solvers.systems import FiberMode, FiberResult, SolutionBox, fiber, fiber_system, solve_bivariate, staged_fiber

logger = logging.getLogger(__name__)

RationalPoint = Tuple[Fraction, Fraction]
OMITTED_POINTS: Tuple[RationalPoint, ...] = ((Fraction(1), Fraction(0)), (Fraction(-1), Fraction(0)))


@dataclass(frozen=True)
class Witness:
    """Two disjoint certified solutions of the same fiber system."""

    map: PolyMap
    target: RationalPoint
    points: Tuple[SolutionBox, SolutionBox]

    def to_record(self) -> WitnessRecord:
        return WitnessRecord(
            map_name=self.map.name,
            components=list(self.map.components),
            target=self.target,
            system=fiber_system(self.map, self.target),
            points=tuple(BoxRecord.from_solution(p) for p in self.points),
        )


def fiber_record(m: PolyMap, result: FiberResult) -> FiberRecord:
    return FiberRecord(
        map_name=m.name,
        components=list(m.components),
        target=result.target,
        mode=result.mode,
        count=result.count,
        system=fiber_system(m, result.target),
        solutions=[BoxRecord.from_solution(s) for s in result.solutions],
    )


def identity_digest(*polys: Polynomial) -> str:
    text = " | ".join(print_canonical(p) for p in polys)
    return "identity:sha256:" + hashlib.sha256(text.encode()).hexdigest()


def _fmt(point: Sequence[Fraction]) -> str:
    return "(" + ",".join(str(v) for v in point) + ")"


# ----------------------------------------------------------------------
# witnesses
# ----------------------------------------------------------------------
def _validate_witness(m: PolyMap, target: RationalPoint, points: Tuple[SolutionBox, SolutionBox]) -> Tuple[SolutionBox, SolutionBox]:
    """Refine both boxes to the witness width; they must stay disjoint and map onto the target."""
    width = settings.witness_width
    refined = tuple(p.refine(width) for p in points)
    if not refined[0].box.disjoint(refined[1].box):
        raise CertificationStalledError("witness boxes overlap after refinement")
    for p in refined:
        for component, t in zip(m.components, target):
            if not component.eval_interval(p.box).contains(t):
                raise CertificationStalledError(f"image of {p} does not enclose the target")
    return refined


def find_witness(m: PolyMap, grid: Optional[GridSpec] = None) -> Witness:
    """First grid point (row-major) whose exact fiber has two or more solutions."""
    grid = grid or settings.witness_grid_spec
    seen = set()
    for point in grid.points():
        target = m(point)
        if target in seen:
            continue
        seen.add(target)
        result = fiber(m, target, FiberMode.EXACT)
        if result.count < 2:
            continue
        own = next((s for s in result.solutions if s.contains(point)), result.solutions[0])
        other = next(s for s in result.solutions if s is not own)
        logger.info("witness for %s: %d preimages of %s found from %s", m.name, result.count, target, point)
        return Witness(m, target, _validate_witness(m, target, (own, other)))
    raise WitnessNotFoundError(f"no fiber of {m.name} with two preimages on the grid {grid}")


def transfer_witness(w: Witness, outer: PolyMap, composed: Optional[PolyMap] = None) -> Witness:
    """Equal inner images stay equal under any outer map."""
    composed = composed or compose_maps(outer, w.map)
    target = outer(w.target)
    return Witness(composed, (target[0], target[1]), w.points)


def lifted_image(G: RationalMap, solution: SolutionBox) -> Box:
    """Enclosure of G on the planar box lifted to z = 0; exact for exact points."""
    lifted = Box(solution.box.intervals + (Interval.point(0),))
    return Box(tuple(
        c.num.with_vars(XYZ).eval_interval(lifted) / c.den.with_vars(XYZ).eval_interval(lifted)
        for c in G.components
    ))


def _shift_witness(w: Witness, shifted: PolyMap, offset: RationalPoint) -> Witness:
    return Witness(shifted, (w.target[0] + offset[0], w.target[1] + offset[1]), w.points)


# ----------------------------------------------------------------------
# check plumbing
# ----------------------------------------------------------------------
def _run_check(
    name: str,
    body: Callable[[], Tuple[bool, str, str, List[Artifact]]],
    spot_check: bool = False,
) -> CheckResult:
    try:
        ok, evidence, detail, artifacts = body()
    except PinchukError as exc:
        logger.warning("❌ check %s failed with %s: %s", name, type(exc).__name__, exc)
        return CheckResult(
            name=name,
            verdict=CheckVerdict.FAIL,
            evidence="error",
            detail=f"{type(exc).__name__}: {exc}",
            spot_check=spot_check,
        )
    verdict = CheckVerdict.PASS if ok else CheckVerdict.FAIL
    logger.info("%s check %s: %s", "✅" if ok else "❌", name, verdict.value)
    return CheckResult(
        name=name, verdict=verdict, evidence=evidence, detail=detail, spot_check=spot_check, artifacts=artifacts
    )


def _exact_roots(poly: Polynomial) -> List[Fraction]:
    roots = isolate_roots(poly, exact_rationals=True)
    if not all(r.is_exact for r in roots):
        raise CertificationStalledError(f"{poly} has irrational real roots")
    return [r.interval.lo for r in roots]


class ClaimSuite:
    """Shared evidence for one seed: the Jacobian certificate of F, its omitted fibers and a witness."""

    def __init__(self, seed: int = 0, base: Optional[PolyMap] = None) -> None:
        self.seed = seed
        self.F = base or map_service.get_map("F")
        self._fibers: Dict[Tuple[str, RationalPoint], FiberResult] = {}

    def fiber(self, m: PolyMap, target: RationalPoint) -> FiberResult:
        key = (m.name, (Fraction(target[0]), Fraction(target[1])))
        if key not in self._fibers:
            self._fibers[key] = fiber(m, key[1], FiberMode.EXACT)
        return self._fibers[key]

    @cached_property
    def jacobian_certificate(self) -> SignCertificate:
        return nonvanishing_sign(jacobian_det(self.F), self.seed)

    @cached_property
    def witness(self) -> Witness:
        return find_witness(self.F, settings.witness_grid_spec)

    @cached_property
    def chain_rule_certificate(self) -> ChainRuleCertificate:
        """J(phi ∘ F) never vanishes: J(F) > 0 and F omits both singular points of phi."""
        phi = map_service.get_map("phi")
        singular = solve_bivariate(*_phi_jacobian_parts())
        points = [s.point for s in singular]
        fibers = [fiber_record(self.F, self.fiber(self.F, p)) for p in points]
        return ChainRuleCertificate(
            map_name=compose_maps_name(phi, self.F),
            inner_certificate=self.jacobian_certificate,
            critical_points=[BoxRecord.from_solution(s) for s in singular],
            omitted_fibers=fibers,
        )


def compose_maps_name(outer: PolyMap, inner: PolyMap) -> str:
    if (outer.name, inner.name) == ("phi", "F"):
        return "f"
    if (outer.name, inner.name) == ("psi", "Ftilde"):
        return "ftilde"
    return f"{outer.name}∘{inner.name}"


def _phi_jacobian_parts() -> Tuple[Polynomial, Polynomial]:
    X, Y = x(), y()
    return 3 * X**2 - 3 * Y**2 - 3, 6 * X * Y


def _psi_jacobian_parts() -> List[Polynomial]:
    return map_service.jacobian_sos("psi")


# ----------------------------------------------------------------------
# claims
# ----------------------------------------------------------------------
def verify_theorem1(
    seed: int = 0,
    base: Optional[PolyMap] = None,
    surjectivity_grid: Optional[GridSpec] = None,
    avoid: Iterable[RationalPoint] = OMITTED_POINTS,
    suite: Optional[ClaimSuite] = None,
) -> ClaimReport:
    suite = suite or ClaimSuite(seed, base)
    m = suite.F
    grid = surjectivity_grid or settings.surjectivity_grid_spec
    avoid = {(Fraction(a), Fraction(b)) for a, b in avoid}

    def jacobian_check():
        cert = suite.jacobian_certificate
        detail = f"det(D {m.name}) {cert.verdict.value}" + (f"({cert.sign.value})" if cert.sign else "")
        detail += f" at anchor value {jacobian_det(m).with_vars(m.domain_vars).eval_exact((0, 0))}"
        return cert.positive, f"sign_certificate:det(D {m.name})", detail, [cert]

    def omitted_check(target: RationalPoint):
        def body():
            result = suite.fiber(m, target)
            detail = "EMPTY (certified)" if result.is_empty else f"{result.count} preimages"
            return result.is_empty, f"fiber:{m.name}@{_fmt(target)}", detail, [fiber_record(m, result)]

        return body

    def witness_check():
        w = suite.witness
        record = w.to_record()
        return True, f"witness:{m.name}", f"two disjoint preimages of {_fmt(w.target)}", [record]

    def surjectivity_check():
        empty = []
        checked = 0
        for point in grid.points():
            if point in avoid:
                continue
            checked += 1
            if suite.fiber(m, point).is_empty:
                empty.append(point)
        detail = f"{checked} targets sampled"
        if empty:
            detail += "; empty fibers at " + ", ".join(_fmt(p) for p in empty)
        return not empty, f"fibers:{m.name}@grid[{grid.x0},{grid.x1}]x[{grid.y0},{grid.y1}]", detail, []

    checks = [
        _run_check("jacobian_nonvanishing", jacobian_check),
        _run_check("omitted_point_plus", omitted_check(OMITTED_POINTS[0])),
        _run_check("omitted_point_minus", omitted_check(OMITTED_POINTS[1])),
        _run_check("non_injectivity_witness", witness_check),
        _run_check("surjectivity_spot_check", surjectivity_check, spot_check=True),
    ]
    return ClaimReport(claim_id=ClaimId.THEOREM1, checks=checks)


def verify_prop2(seed: int = 0, suite: Optional[ClaimSuite] = None) -> ClaimReport:
    suite = suite or ClaimSuite(seed)
    F = suite.F
    phi = map_service.get_map("phi")
    z = Polynomial.var("z")

    def singular_check():
        roots = _exact_roots(3 * z**2 - 3)
        return roots == [-1, 1], "roots:3*z^2 - 3", f"real roots {roots}", []

    def critical_values_check():
        minus = _exact_roots(z**3 - 3 * z - 2)
        plus = _exact_roots(z**3 - 3 * z + 2)
        images = {v: phi((Fraction(v), Fraction(0))) for v in (1, -1, 2, -2)}
        ok = (
            minus == [-1, 2]
            and plus == [-2, 1]
            and images[1] == (-2, 0)
            and images[-1] == (2, 0)
            and images[2] == (2, 0)
            and images[-2] == (-2, 0)
        )
        detail = (
            f"z^3-3z-2: {minus}; z^3-3z+2: {plus}; "
            + "; ".join(f"phi({v},0)={_fmt(img)}" for v, img in images.items())
        )
        return ok, "roots:z^3 - 3*z -+ 2", detail, []

    def critical_fibers_check():
        results = [suite.fiber(F, (Fraction(v), Fraction(0))) for v in (2, -2)]
        ok = all(not r.is_empty for r in results)
        detail = ", ".join(f"F^-1{_fmt(r.target)}: {r.count} preimages" for r in results)
        return ok, f"fibers:{F.name}@(±2,0)", detail, [fiber_record(F, r) for r in results]

    def chain_rule_check():
        a, b = _phi_jacobian_parts()
        identity = verify_sos(jacobian_det(phi), [a, b])
        cert = suite.chain_rule_certificate
        singular = sorted(tuple(p.x) + tuple(p.y) for p in cert.critical_points)
        expected = sorted(((v, v, Fraction(0), Fraction(0)) for v in (Fraction(-1), Fraction(1))))
        ok = identity and singular == expected and cert.never_vanishes
        detail = f"det(D phi) = (3x^2-3y^2-3)^2 + (6xy)^2: {identity}; singular points {len(singular)}"
        return ok, "chain_rule:f", detail, [cert]

    def transfer_check():
        w = transfer_witness(suite.witness, phi, map_service.get_map("f"))
        return True, "witness:f", f"common image {_fmt(w.target)}", [w.to_record()]

    checks = [
        _run_check("phi_singular_points", singular_check),
        _run_check("critical_value_preimages", critical_values_check),
        _run_check("critical_value_fibers", critical_fibers_check),
        _run_check("jacobian_chain_rule", chain_rule_check),
        _run_check("witness_transfer", transfer_check),
    ]
    return ClaimReport(claim_id=ClaimId.PROP2, checks=checks)


def verify_prop3(seed: int = 0, suite: Optional[ClaimSuite] = None) -> ClaimReport:
    suite = suite or ClaimSuite(seed)
    F = suite.F
    psi = map_service.get_map("psi")
    parts = _psi_jacobian_parts()

    def sos_check():
        g = jacobian_det(psi)
        return verify_sos(g, parts), identity_digest(g, *parts), "det(D psi) = (2y+2xy^2+x)^2 + x^2(2y^2+3)^2", []

    def singular_check():
        common = solve_bivariate(*parts)
        ok = len(common) == 1 and common[0].is_exact and common[0].point == (0, 0)
        return ok, "system:SOS parts of det(D psi)", "common zeros: " + ", ".join(str(s) for s in common), []

    def origin_check():
        result = suite.fiber(F, OMITTED_POINTS[1])
        detail = "F^-1(-1,0) empty, so (0,0) is not a value of Ftilde = (p+1, q)"
        return result.is_empty, f"fiber:{F.name}@(-1,0)", detail, [fiber_record(F, result)]

    def positivity_check():
        cert = nonvanishing_sign(psi.components[1], seed)
        return cert.positive, "sign_certificate:(x*y+1)^2 + x^2", f"{cert.verdict.value} via {cert.method.value}", [cert]

    def transfer_check():
        shifted = _shift_witness(suite.witness, map_service.get_map("Ftilde"), (Fraction(1), Fraction(0)))
        w = transfer_witness(shifted, psi, map_service.get_map("ftilde"))
        return True, "witness:ftilde", f"common image {_fmt(w.target)}", [w.to_record()]

    checks = [
        _run_check("psi_sos_identity", sos_check),
        _run_check("psi_singular_point", singular_check),
        _run_check("origin_not_in_image", origin_check),
        _run_check("second_component_positive", positivity_check),
        _run_check("witness_transfer", transfer_check),
    ]
    return ClaimReport(claim_id=ClaimId.PROP3, checks=checks)


def lift_preimage(
    f: PolyMap, j: Polynomial, target: Tuple[Fraction, Fraction, Fraction], planar: Sequence[Tuple[Fraction, Fraction]]
) -> Tuple[Tuple[Fraction, Fraction, Fraction], Fraction]:
    """Polished preimage of (u, v, w) under the lift and its exact sup-norm residual."""
    u, v, w = target
    px, py = min(planar, key=lambda p: p[0] ** 2 + p[1] ** 2)
    qx, qy = polish(f, (u, v), (px, py))
    jv = j.eval_exact((qx, qy))
    zv = w * jv
    fx, fy = f((qx, qy))
    residual = max(abs(fx - u), abs(fy - v), abs(zv / jv - w))
    return (qx, qy, zv), residual


def verify_example4(seed: int = 0, suite: Optional[ClaimSuite] = None, lift_grid: Optional[LiftGrid] = None) -> ClaimReport:
    suite = suite or ClaimSuite(seed)
    phi, F = map_service.get_map("phi"), suite.F
    f = map_service.get_map("f")
    lift_grid = lift_grid or settings.lift_grid_spec
    state: Dict[str, RationalMap] = {}

    def lift():
        if "G" not in state:
            state["G"] = build_G(f, suite.chain_rule_certificate)
        return state["G"]

    def unit_jacobian_check():
        jac = rf_jacobian_det(lift())
        return jac == 1, "identity:J(G)", f"J(G) = {jac}", [suite.chain_rule_certificate]

    def non_injective_check():
        G = lift()
        w = transfer_witness(suite.witness, phi, f)
        lifted_target = (w.target[0], w.target[1], Fraction(0))
        images = [lifted_image(G, p) for p in w.points]
        on_target = all(image.contains(lifted_target) for image in images)
        flat = all(image[2].is_point and image[2].lo == 0 for image in images)
        disjoint = w.points[0].box.disjoint(w.points[1].box)
        detail = f"G maps both points at z=0 onto {_fmt(lifted_target)}: {on_target and flat}"
        return on_target and flat and disjoint, "witness:f", detail, [w.to_record()]

    def surjectivity_check():
        lift()
        j = jacobian_det(f)
        planar_cache: Dict[Tuple[Fraction, Fraction], list] = {}
        worst = Fraction(0)
        missing = []
        for u, v, w in lift_grid.points():
            if (u, v) not in planar_cache:
                planar_cache[(u, v)] = [s.point for s in staged_fiber(phi, F, (u, v)).solutions]
            planar = planar_cache[(u, v)]
            if not planar:
                missing.append((u, v, w))
                continue
            _, residual = lift_preimage(f, j, (u, v, w), planar)
            worst = max(worst, residual)
        ok = not missing and worst < Fraction(settings.lift_residual_tol)
        detail = f"{len(lift_grid.values) ** 3} targets; max residual {float(worst):.3e}"
        if missing:
            detail += "; no preimage found for " + ", ".join(_fmt(t) for t in missing)
        return ok, "spot_check:G surjectivity", detail, []

    checks = [
        _run_check("lift_unit_jacobian", unit_jacobian_check),
        _run_check("lift_non_injective", non_injective_check),
        _run_check("lift_surjectivity", surjectivity_check, spot_check=True),
    ]
    return ClaimReport(claim_id=ClaimId.EXAMPLE4, checks=checks)


CLAIMS: Dict[ClaimId, Callable[..., ClaimReport]] = {
    ClaimId.THEOREM1: verify_theorem1,
    ClaimId.PROP2: verify_prop2,
    ClaimId.PROP3: verify_prop3,
    ClaimId.EXAMPLE4: verify_example4,
}


def verify_claims(claims: Sequence[ClaimId], seed: int = 0) -> ClaimReportFile:
    """Run the requested claims against one shared evidence suite."""
    suite = ClaimSuite(seed)
    reports = [CLAIMS[ClaimId(c)](seed=seed, suite=suite) for c in claims]
    failed = any(r.overall is CheckVerdict.FAIL for r in reports)
    return ClaimReportFile(seed=seed, claims=reports, overall=CheckVerdict.FAIL if failed else CheckVerdict.PASS)


# ----------------------------------------------------------------------
# lifts
# ----------------------------------------------------------------------
LIFTS = ("G", "G_F")


def lift_for(name: str, seed: int = 0, suite: Optional[ClaimSuite] = None) -> RationalMap:
    """Registry lifts: "G" over f = phi ∘ F, "G_F" over F itself."""
    suite = suite or ClaimSuite(seed)
    if name == "G":
        return build_G(map_service.get_map("f"), suite.chain_rule_certificate)
    if name == "G_F":
        return build_G(suite.F, suite.jacobian_certificate)
    raise UnknownMapError(f"unknown lift {name!r}; available lifts: {', '.join(LIFTS)}")


# ----------------------------------------------------------------------
# replay
# ----------------------------------------------------------------------
def _record_map(record: Union[FiberRecord, WitnessRecord]) -> PolyMap:
    return PolyMap(record.map_name, tuple(record.components))


def _check_system(m: PolyMap, record: Union[FiberRecord, WitnessRecord]) -> None:
    if tuple(record.system) != fiber_system(m, record.target):
        raise ReplayMismatchError("recorded system does not match the components and target")


def _matching(recorded: Box, solutions: Sequence[SolutionBox]) -> List[SolutionBox]:
    """Fresh solutions whose box, refined to the recorded width, meets the recorded box."""
    width = recorded.width or settings.witness_width
    return [s for s in solutions if not s.refine(width).box.disjoint(recorded)]


def replay_fiber(record: FiberRecord) -> FiberResult:
    """Re-solve; every recorded box must hold exactly one fresh solution."""
    m = _record_map(record)
    _check_system(m, record)
    fresh = fiber(m, record.target, record.mode)
    if fresh.count != record.count:
        raise ReplayMismatchError(f"replayed count {fresh.count} differs from recorded {record.count}")
    if record.mode is FiberMode.EXACT:
        for box in record.solutions:
            recorded = box.to_box()
            if not _matching(recorded, fresh.solutions):
                raise ReplayMismatchError(f"recorded box {box.x} x {box.y} holds no fresh solution")
    return fresh


def replay_witness(record: WitnessRecord) -> Witness:
    """Recorded boxes must be disjoint and each must map onto the target and isolate a solution."""
    m = _record_map(record)
    _check_system(m, record)
    boxes = [p.to_box() for p in record.points]
    if not boxes[0].disjoint(boxes[1]):
        raise ReplayMismatchError("witness boxes overlap")
    for box in boxes:
        for component, t in zip(m.components, record.target):
            if not component.eval_interval(box).contains(t):
                raise ReplayMismatchError("witness box image misses the target")
    if not eligible_for_exact(m):
        # composed maps: the enclosure test above is the whole replay
        system = fiber_system(m, record.target)
        points = tuple(SolutionBox(box, system, p.multiplicity_note) for box, p in zip(boxes, record.points))
        return Witness(m, record.target, points)
    fresh = fiber(m, record.target, FiberMode.EXACT)
    found = []
    for box in boxes:
        inside = _matching(box, fresh.solutions)
        if not inside:
            raise ReplayMismatchError("witness box holds no fresh solution")
        found.append(inside[0])
    return Witness(m, record.target, tuple(found))


def replay_chain_rule(certificate: ChainRuleCertificate) -> ChainRuleCertificate:
    replay_sign_certificate(certificate.inner_certificate)
    for record in certificate.omitted_fibers:
        replay_fiber(record)
    if not certificate.never_vanishes:
        raise ReplayMismatchError("chain-rule certificate does not establish non-vanishing")
    return certificate


def replay_report(report: ClaimReportFile) -> ClaimReportFile:
    fresh = verify_claims([c.claim_id for c in report.claims], seed=report.seed)
    if fresh.model_dump_json() != report.model_dump_json():
        raise ReplayMismatchError("re-run report differs from the recorded one")
    return fresh


def replay_record(record) -> str:
    """Dispatch on the record kind; returns a one-line summary or raises ReplayMismatchError."""
    if isinstance(record, SignCertificate):
        fresh = replay_sign_certificate(record)
        return f"sign_certificate: {fresh.verdict.value}" + (f"({fresh.sign.value})" if fresh.sign else "")
    if isinstance(record, ChainRuleCertificate):
        replay_chain_rule(record)
        return f"chain_rule: det(D {record.map_name}) NeverVanishes"
    if isinstance(record, FiberRecord):
        fresh = replay_fiber(record)
        return f"fiber: {fresh.count} preimages of {_fmt(fresh.target)}"
    if isinstance(record, WitnessRecord):
        replay_witness(record)
        return f"witness: {record.map_name} identifies two points over {_fmt(record.target)}"
    if isinstance(record, ClaimReportFile):
        fresh = replay_report(record)
        return f"claim_report: {fresh.overall.value}"
    raise ReplayMismatchError(f"cannot replay {type(record).__name__}")
