"""
Command-line entry point `pinchuk`.

Exit codes: 0 on success, 1 when a verified claim FAILs, 2 on usage or
computation errors (one line on stderr).
"""
import argparse
import csv
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, ValidationError

from app.algebra.parser import format_rational, parse_map_def, parse_point, parse_poly
from app.algebra.poly import PolyMap, jacobian_det
from app.algebra.ratfunc import rf_jacobian_det
from app.core.config import settings
from app.core.exceptions import PinchukError
from app.core.grid import GridSpec
from app.core.logging import configure_logging
from app.schemas import CheckVerdict, ClaimId, RecordEnvelope, ScanSidecar
from app.services.certify import SignMethod, nonvanishing_sign
from app.services.claims import LIFTS, fiber_record, find_witness, lift_for, replay_record, verify_claims
from app.services.maps import map_service
from app.solvers.systems import FiberMode, Multiplicity, fiber
from app.worker.pool import run_scan

logger = logging.getLogger(__name__)

CSV_HEADER = ["target_x", "target_y", "count", "mode"]
MODES = {"exact": FiberMode.EXACT, "approx": FiberMode.APPROXIMATE, "approximate": FiberMode.APPROXIMATE}


def _resolve_map(args: argparse.Namespace) -> PolyMap:
    if getattr(args, "map_def", None):
        return parse_map_def(args.map_def)
    return map_service.get_map(args.map)


def _emit(model: BaseModel, out: Optional[str]) -> None:
    text = model.model_dump_json(indent=2)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _decimal(value) -> str:
    return "%.*g" % (settings.csv_significant_digits, float(value))


def _tuple(values) -> str:
    return "(" + ", ".join(str(v) for v in values) + ")"


# ----------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------
def cmd_verify(args: argparse.Namespace) -> int:
    claims: List[ClaimId] = list(ClaimId) if args.claim == "all" else [ClaimId(args.claim)]
    report = verify_claims(claims, seed=args.seed)
    if args.out:
        _emit(report, args.out)
        for claim in report.claims:
            print(f"{claim.claim_id.value}: {claim.overall.value}")
            for check in claim.checks:
                print(f"  {check.name}: {check.verdict.value}  {check.detail}")
    else:
        _emit(report, None)
    return 0 if report.overall is CheckVerdict.PASS else 1


def cmd_fiber(args: argparse.Namespace) -> int:
    m = _resolve_map(args)
    target = parse_point(args.target, 2)
    mode = MODES[args.mode]
    result = fiber(m, target, mode)
    if args.out:
        _emit(fiber_record(m, result), args.out)
    if result.is_empty:
        print("EMPTY (certified)" if mode is FiberMode.EXACT else "EMPTY (no approximate solution found)")
        return 0
    width = parse_point(args.width, 1)[0] if args.width else None
    label = "certified" if mode is FiberMode.EXACT else "lower bound"
    print(f"{result.count} preimage(s) of {_tuple(result.target)} ({label})")
    for solution in result.solutions:
        if width is not None:
            solution = solution.refine(width)
        note = "  (multiplicity unknown)" if solution.multiplicity_note is Multiplicity.UNKNOWN else ""
        print(f"  {solution}{note}")
    return 0


def cmd_jacobian(args: argparse.Namespace) -> int:
    m = _resolve_map(args)
    j = jacobian_det(m)
    if args.at:
        print(format_rational(j.with_vars(m.domain_vars).eval_exact(parse_point(args.at, len(m.domain_vars)))))
    else:
        print(j)
    return 0


def cmd_scan(args: argparse.Namespace) -> int:
    m = _resolve_map(args)
    grid = GridSpec.from_rectangle(args.rect, args.steps)
    mode = MODES[args.mode]
    points = run_scan(m, grid, mode, args.workers)
    with open(args.out, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for p in points:
            writer.writerow([_decimal(p.target[0]), _decimal(p.target[1]), p.count, p.mode.value])
    rect = (grid.x0, grid.x1, grid.y0, grid.y1)
    sidecar = ScanSidecar(map_name=m.name, rect=rect, steps=args.steps, mode=mode, points=points)
    _emit(sidecar, f"{args.out}.json")
    print(f"{len(points)} rows written to {args.out}")
    return 0


def cmd_witness(args: argparse.Namespace) -> int:
    m = _resolve_map(args)
    grid = GridSpec.parse(args.grid) if args.grid else None
    witness = find_witness(m, grid)
    if args.out:
        _emit(witness.to_record(), args.out)
    print(f"{m.name}{_tuple(witness.points[0].point)} = {m.name}{_tuple(witness.points[1].point)} ~ {_tuple(witness.target)}")
    for p in witness.points:
        print(f"  {p}")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    m = _resolve_map(args)
    print(_tuple(m(parse_point(args.at, len(m.domain_vars)))))
    return 0


def cmd_replay(args: argparse.Namespace) -> int:
    raw = json.loads(Path(args.cert).read_text(encoding="utf-8"))
    envelope = RecordEnvelope.model_validate({"record": raw})
    print(replay_record(envelope.record))
    return 0


def cmd_parse(args: argparse.Namespace) -> int:
    print(parse_poly(args.poly))
    return 0


def cmd_sign(args: argparse.Namespace) -> int:
    if args.poly:
        g = parse_poly(args.poly)
        parts = None
    else:
        m = _resolve_map(args)
        g = jacobian_det(m)
        parts = map_service.jacobian_sos(m.name) if args.method == SignMethod.SOS.value else None
    certificate = nonvanishing_sign(g, seed=args.seed, sos_parts=parts, method=SignMethod(args.method))
    if args.out:
        _emit(certificate, args.out)
    sign = f"({certificate.sign.value})" if certificate.sign else ""
    print(f"{certificate.verdict.value}{sign} via {certificate.method.value}")
    return 0


def cmd_lift(args: argparse.Namespace) -> int:
    G = lift_for(args.base, seed=args.seed)
    print(f"{G.name}: J = {rf_jacobian_det(G)}")
    return 0


# ----------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------
def _map_options(p: argparse.ArgumentParser, required: bool = True) -> None:
    group = p.add_mutually_exclusive_group(required=required)
    group.add_argument("--map", choices=map_service.list_available_maps(), help="Registry map")
    group.add_argument("--map-def", help='Custom map "P1;P2" in the polynomial grammar')


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pinchuk", description="Certified computations on Pinchuk-type maps")
    ap.add_argument("--log-level", default=None, help="Logging level (default from settings)")
    sub = ap.add_subparsers(dest="cmd", required=True)

    v = sub.add_parser("verify", help="Run the claim suite")
    v.add_argument("--claim", choices=[c.value for c in ClaimId] + ["all"], default="all")
    v.add_argument("--seed", type=int, default=settings.seed)
    v.add_argument("--out", default="")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("fiber", help="Preimage of a rational target")
    _map_options(f)
    f.add_argument("--target", required=True, help='Target "a,b"')
    f.add_argument("--mode", choices=sorted(MODES), default="exact")
    f.add_argument("--width", default="", help="Refine boxes to this width")
    f.add_argument("--out", default="")
    f.set_defaults(func=cmd_fiber)

    j = sub.add_parser("jacobian", help="Jacobian determinant")
    _map_options(j)
    j.add_argument("--at", default="", help='Evaluate at "a,b"')
    j.set_defaults(func=cmd_jacobian)

    s = sub.add_parser("scan", help="Fiber counts over a rational grid, written as CSV")
    _map_options(s)
    s.add_argument("--rect", required=True, help='"x0,x1,y0,y1"')
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--mode", choices=sorted(MODES), default="exact")
    s.add_argument("--workers", type=int, default=None, help="Worker processes (default from settings)")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_scan)

    w = sub.add_parser("witness", help="Search a grid for a non-injectivity witness")
    _map_options(w)
    w.add_argument("--grid", default="", help='"x0,x1,y0,y1,step"')
    w.add_argument("--out", default="")
    w.set_defaults(func=cmd_witness)

    e = sub.add_parser("eval", help="Evaluate a map exactly")
    _map_options(e)
    e.add_argument("--at", required=True)
    e.set_defaults(func=cmd_eval)

    r = sub.add_parser("replay", help="Re-derive a serialized record")
    r.add_argument("--cert", required=True)
    r.set_defaults(func=cmd_replay)

    p = sub.add_parser("parse", help="Print a polynomial in canonical form")
    p.add_argument("--poly", required=True)
    p.set_defaults(func=cmd_parse)

    g = sub.add_parser("sign", help="Global sign certificate of det(D map) or of a polynomial")
    group = g.add_mutually_exclusive_group(required=True)
    group.add_argument("--map", choices=map_service.list_available_maps())
    group.add_argument("--map-def")
    group.add_argument("--poly")
    g.add_argument("--method", choices=[m.value for m in SignMethod], default=SignMethod.AUTO.value)
    g.add_argument("--seed", type=int, default=settings.seed)
    g.add_argument("--out", default="")
    g.set_defaults(func=cmd_sign)

    lift = sub.add_parser("lift", help="Build the unit-Jacobian lift and print its Jacobian")
    lift.add_argument("--base", choices=LIFTS, default="G")
    lift.add_argument("--seed", type=int, default=settings.seed)
    lift.set_defaults(func=cmd_lift)

    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        return args.func(args)
    except (PinchukError, ValidationError, OSError, json.JSONDecodeError) as exc:
        message = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"error: {type(exc).__name__}: {message}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
