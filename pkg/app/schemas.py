"""
Serializable records: sign certificates, fibers, witnesses, claim reports
and scan rows.

Polynomials travel as canonical strings and rationals as "n/d", so every
record survives a JSON round trip exactly. No timestamps are recorded.
"""
from enum import Enum
from fractions import Fraction
from typing import Annotated, Any, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, PlainValidator, computed_field

from app.algebra.interval import Box, Interval
from app.algebra.parser import format_rational, parse_poly, parse_rational, print_canonical
from app.algebra.poly import Polynomial
from app.solvers.systems import FiberMode, Multiplicity, SolutionBox


def _to_polynomial(value: Any) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    return parse_poly(str(value))


def _to_rational(value: Any) -> Fraction:
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    return parse_rational(str(value))


PolyField = Annotated[Polynomial, PlainValidator(_to_polynomial), PlainSerializer(print_canonical, return_type=str)]
RationalField = Annotated[Fraction, PlainValidator(_to_rational), PlainSerializer(format_rational, return_type=str)]
RationalPair = Tuple[RationalField, RationalField]


class ExactModel(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)


class Verdict(str, Enum):
    NEVER_VANISHES = "NeverVanishes"
    VANISHES = "Vanishes"


class Sign(str, Enum):
    POSITIVE = "+"
    NEGATIVE = "-"


class CertMethod(str, Enum):
    SOS = "sos"
    DISTANCE_CRITICAL = "distance_critical"


class CheckVerdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    SKIPPED = "SKIPPED"


class ClaimId(str, Enum):
    THEOREM1 = "theorem1"
    PROP2 = "prop2"
    PROP3 = "prop3"
    EXAMPLE4 = "example4"


class BoxRecord(ExactModel):
    """An isolating box; exact solutions have lo == hi on both axes."""

    x: RationalPair
    y: RationalPair
    multiplicity_note: Multiplicity = Multiplicity.SIMPLE

    @classmethod
    def from_solution(cls, solution: SolutionBox) -> "BoxRecord":
        bx, by = solution.box.intervals
        return cls(x=(bx.lo, bx.hi), y=(by.lo, by.hi), multiplicity_note=solution.multiplicity_note)

    @classmethod
    def from_point(cls, point: Tuple[Fraction, Fraction]) -> "BoxRecord":
        return cls(x=(point[0], point[0]), y=(point[1], point[1]))

    def to_box(self) -> Box:
        return Box((Interval(*self.x), Interval(*self.y)))


class SignCertificate(ExactModel):
    """Global sign of a bivariate polynomial on the whole real plane."""

    kind: Literal["sign_certificate"] = "sign_certificate"
    polynomial: PolyField
    verdict: Verdict
    sign: Optional[Sign] = None
    witness: Optional[BoxRecord] = None
    method: CertMethod
    seed: int = 0
    center: Optional[RationalPair] = None
    auxiliary_system: Optional[Tuple[PolyField, PolyField]] = None
    sos_parts: Optional[List[PolyField]] = None

    @property
    def never_vanishes(self) -> bool:
        return self.verdict is Verdict.NEVER_VANISHES

    @property
    def positive(self) -> bool:
        return self.never_vanishes and self.sign is Sign.POSITIVE


class FiberRecord(ExactModel):
    kind: Literal["fiber"] = "fiber"
    map_name: str
    components: List[PolyField]
    target: RationalPair
    mode: FiberMode
    count: int = Field(..., ge=0)
    system: Tuple[PolyField, PolyField]
    solutions: List[BoxRecord] = Field(default_factory=list)


class WitnessRecord(ExactModel):
    """Two disjoint certified boxes with the same image: the map is not injective."""

    kind: Literal["witness"] = "witness"
    map_name: str
    components: List[PolyField]
    target: RationalPair
    system: Tuple[PolyField, PolyField]
    points: Tuple[BoxRecord, BoxRecord]


class ChainRuleCertificate(ExactModel):
    """
    J(outer ∘ inner) never vanishes: J(inner) never vanishes and inner omits
    every singular point of outer, so det multiplicativity does the rest.
    """

    kind: Literal["chain_rule"] = "chain_rule"
    map_name: str
    inner_certificate: SignCertificate
    critical_points: List[BoxRecord]
    omitted_fibers: List[FiberRecord]

    @property
    def never_vanishes(self) -> bool:
        return (
            self.inner_certificate.never_vanishes
            and len(self.omitted_fibers) == len(self.critical_points)
            and all(f.mode is FiberMode.EXACT and f.count == 0 for f in self.omitted_fibers)
        )


Artifact = Annotated[Union[SignCertificate, FiberRecord, WitnessRecord, ChainRuleCertificate], Field(discriminator="kind")]


class CheckResult(ExactModel):
    name: str
    verdict: CheckVerdict
    evidence: str = Field(..., description="Reference to the artifact backing the verdict")
    detail: str = ""
    spot_check: bool = False
    required: bool = True
    artifacts: List[Artifact] = Field(default_factory=list)


class ClaimReport(ExactModel):
    claim_id: ClaimId
    checks: List[CheckResult]

    @computed_field
    @property
    def overall(self) -> CheckVerdict:
        failed = any(c.verdict is CheckVerdict.FAIL for c in self.checks)
        skipped = any(c.verdict is CheckVerdict.SKIPPED and c.required for c in self.checks)
        return CheckVerdict.FAIL if failed or skipped else CheckVerdict.PASS

    def check(self, name: str) -> CheckResult:
        return next(c for c in self.checks if c.name == name)


class ClaimReportFile(ExactModel):
    """What `verify` writes: one or more claim reports and the seed they ran with."""

    kind: Literal["claim_report"] = "claim_report"
    seed: int
    claims: List[ClaimReport]
    overall: CheckVerdict


class ScanRow(ExactModel):
    target_x: str
    target_y: str
    count: int = Field(..., ge=0)
    mode: FiberMode


class ScanPoint(ExactModel):
    """Exact counterpart of a scan row, kept in the JSON sidecar."""

    target: RationalPair
    count: int = Field(..., ge=0)
    mode: FiberMode


class ScanSidecar(ExactModel):
    kind: Literal["scan"] = "scan"
    map_name: str
    rect: Tuple[RationalField, RationalField, RationalField, RationalField]
    steps: int
    mode: FiberMode
    points: List[ScanPoint]


Record = Annotated[
    Union[SignCertificate, ChainRuleCertificate, FiberRecord, WitnessRecord, ClaimReportFile],
    Field(discriminator="kind"),
]


class RecordEnvelope(ExactModel):
    """Wrapper used by `replay` to parse any record kind."""

    record: Record
