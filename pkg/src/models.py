from __future__ import annotations
from pydantic import BaseModel, Field, ConfigDict, computed_field, model_validator
from typing import Any, Dict, List, Literal, Optional

# -----------------------------------------------------------------------------
# Constants
# -----------------------------------------------------------------------------

SCHEMA_VERSION = 1

VERDICT_TRUE = "true"
VERDICT_FALSE = "false"
VERDICT_UNKNOWN = "unknown"

STATUS_PASS = "pass"
STATUS_FAIL = "fail"
STATUS_UNDETERMINED = "undetermined"
STATUS_VACUOUS = "vacuous"

EXIT_CODES = {STATUS_PASS: 0, STATUS_FAIL: 1, STATUS_UNDETERMINED: 2}

# Worst status wins when reports are combined.
_STATUS_RANK = {STATUS_PASS: 0, STATUS_VACUOUS: 0, STATUS_UNDETERMINED: 1, STATUS_FAIL: 2}


def worst_status(statuses: List[str]) -> str:
    """Combine statuses; a violation outranks an undetermined instance."""
    if not statuses:
        return STATUS_PASS
    worst = max(statuses, key=lambda s: _STATUS_RANK.get(s, 0))
    return STATUS_PASS if worst == STATUS_VACUOUS else worst


# -----------------------------------------------------------------------------
# Evaluation
# -----------------------------------------------------------------------------

class CertificateStep(BaseModel):
    role: Literal["witness", "counterexample", "exhausted"]
    var: int
    value: int


class Verdict(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    verdict: Literal["true", "false", "unknown"]
    certificate: List[CertificateStep] = Field(default_factory=list)
    sentence: Optional[str] = None
    budget: Optional[int] = None

    @property
    def determined(self) -> bool:
        return self.verdict != VERDICT_UNKNOWN

    def as_bool(self) -> Optional[bool]:
        if self.verdict == VERDICT_TRUE:
            return True
        if self.verdict == VERDICT_FALSE:
            return False
        return None


# -----------------------------------------------------------------------------
# Principle checks
# -----------------------------------------------------------------------------

class Violation(BaseModel):
    family: str
    instance: str
    explanation: str


class PrincipleReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    principle: str
    instances: int = 0
    violations: List[Violation] = Field(default_factory=list)
    undetermined: List[str] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)

    @computed_field  # type: ignore[misc]
    @property
    def verdict(self) -> str:
        if self.violations:
            return STATUS_FAIL
        if self.undetermined:
            return STATUS_UNDETERMINED
        return STATUS_PASS

    def violate(self, family: str, instance: str, explanation: str) -> None:
        self.violations.append(Violation(family=family, instance=instance, explanation=explanation))

    def families(self) -> set[str]:
        return {item.family for item in self.violations}

    def absorb(self, other: "PrincipleReport") -> "PrincipleReport":
        self.instances += other.instances
        self.violations.extend(other.violations)
        self.undetermined.extend(other.undetermined)
        self.notes.extend(other.notes)
        return self


# -----------------------------------------------------------------------------
# Derivations
# -----------------------------------------------------------------------------

class YabloReport(BaseModel):
    length: int
    budget: int
    passed: bool
    first_failure: Optional[int] = None
    failure_kind: Optional[str] = None
    append_audit: List[Violation] = Field(default_factory=list)
    dag_size: int = 0
    source_size: int = 0
    flat_size_last: int = 0

    @computed_field  # type: ignore[misc]
    @property
    def verdict(self) -> str:
        return STATUS_PASS if self.passed and not self.append_audit else STATUS_FAIL


class ReplayReport(BaseModel):
    name: str
    length: int
    confirmed: bool
    hypothesis_empty: bool = False
    steps: List[str] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)

    @computed_field  # type: ignore[misc]
    @property
    def verdict(self) -> str:
        return STATUS_PASS if self.confirmed else STATUS_FAIL


class ProofLine(BaseModel):
    formula: str
    rule: Literal["premise", "mp"] = "premise"
    cites: List[int] = Field(default_factory=list)


class ProofFile(BaseModel):
    lines: List[ProofLine]


class ProofReport(BaseModel):
    valid: bool
    lines: int
    conclusion: Optional[str] = None
    classification: Literal["PrPropT", "none"] = "none"
    premises_true: Optional[bool] = None
    propref: Literal["confirmed", "violated", "not-applicable", "undetermined"] = "not-applicable"
    propsnd: Optional[bool] = None
    notes: List[str] = Field(default_factory=list)

    @computed_field  # type: ignore[misc]
    @property
    def verdict(self) -> str:
        if not self.valid or self.propref == "violated":
            return STATUS_FAIL
        if self.propref == "undetermined":
            return STATUS_UNDETERMINED
        return STATUS_PASS


# -----------------------------------------------------------------------------
# Satisfaction classes
# -----------------------------------------------------------------------------

class SchemeAudit(BaseModel):
    name: str
    status: Literal["pass", "fail", "vacuous"]
    instances: int = 0
    details: List[str] = Field(default_factory=list)


class SatClassReport(BaseModel):
    pairs: int
    domain: int
    violations: List[Violation] = Field(default_factory=list)

    @computed_field  # type: ignore[misc]
    @property
    def valid(self) -> bool:
        return not self.violations


class PairRecord(BaseModel):
    formula: str
    assignment: Dict[str, int] = Field(default_factory=dict)


class BaseRecord(BaseModel):
    domain: List[str] = Field(default_factory=list)
    pairs: List[PairRecord] = Field(default_factory=list)


class ScenarioFile(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    environment: Optional[List[str]] = None
    targets: List[str]
    base: BaseRecord = Field(default_factory=BaseRecord)
    long_cut: int = Field(default=4, ge=1)
    universe: int = Field(default=3, ge=1)
    policy: Literal["satisfy", "falsify-balanced"] = "satisfy"
    complete_base: bool = True


class EVReport(BaseModel):
    environment: int
    classes: int
    considered_classes: int
    stages: int
    stage_sizes: List[int] = Field(default_factory=list)
    policy: str = "satisfy"
    long_cut: int = 4
    audits: List[SchemeAudit] = Field(default_factory=list)
    result_pairs: int = 0
    result_domain: int = 0
    satisfaction: Optional[SatClassReport] = None
    pairs: Optional[List[PairRecord]] = None

    @computed_field  # type: ignore[misc]
    @property
    def passed(self) -> bool:
        audits_ok = all(audit.status != STATUS_FAIL for audit in self.audits)
        return audits_ok and (self.satisfaction is None or self.satisfaction.valid)


# -----------------------------------------------------------------------------
# Cut models
# -----------------------------------------------------------------------------

class CutModel(BaseModel):
    """Finite universe [0, size) with [0, cut) playing the standard cut."""
    model_config = ConfigDict(populate_by_name=True)

    size: int = Field(ge=1)
    cut: int = Field(ge=0)
    sequences: List[List[int]] = Field(default_factory=list)
    long_threshold: Optional[int] = Field(default=None, alias="threshold")

    @model_validator(mode="after")
    def _check_bounds(self) -> "CutModel":
        if self.cut >= self.size:
            raise ValueError(f"cut {self.cut} must be below size {self.size}")
        for position, seq in enumerate(self.sequences):
            for value in seq:
                if value < 0 or value >= self.size:
                    raise ValueError(f"sequence {position} has entry {value} outside [0, {self.size})")
        return self

    def effective_threshold(self, divisor: int = 10) -> int:
        if self.long_threshold is not None:
            return max(1, self.long_threshold)
        return max(1, self.cut // max(1, divisor))


class TraceStep(BaseModel):
    index: int
    branch: Literal["keep", "extend", "skip", "finite"]
    added_a: Optional[int] = None
    added_b: Optional[int] = None
    note: str = ""


class ApproxTrace(BaseModel):
    which: Literal["A", "B"]
    cut: int
    initial_a: List[int] = Field(default_factory=list)
    initial_b: List[int] = Field(default_factory=list)
    steps: List[TraceStep] = Field(default_factory=list)
    final_t: List[int] = Field(default_factory=list)

    def snapshot(self, upto: int) -> tuple[set[int], set[int]]:
        """(A_i, B_i) after the first ``upto`` steps."""
        a = set(self.initial_a)
        b = set(self.initial_b)
        for step in self.steps[:upto]:
            if step.added_a is not None:
                a.add(step.added_a)
            if step.added_b is not None:
                b.add(step.added_b)
        return a, b

    @property
    def extensions(self) -> int:
        return sum(1 for step in self.steps if step.branch == "extend")

    @property
    def skips(self) -> List[int]:
        return [step.index for step in self.steps if step.branch == "skip"]


class CutModelRun(BaseModel):
    model: Dict[str, Any]
    trace: ApproxTrace
    audit: PrincipleReport


# -----------------------------------------------------------------------------
# Check inputs
# -----------------------------------------------------------------------------

class ValuationEntry(BaseModel):
    sentence: str
    value: bool


class CheckInput(BaseModel):
    """Input file of ``check``; which fields matter depends on the principle."""
    model_config = ConfigDict(populate_by_name=True)

    valuation: List[ValuationEntry] = Field(default_factory=list)
    evaluate_closure: bool = False
    sentences: List[str] = Field(default_factory=list)
    sequences: List[List[str]] = Field(default_factory=list)
    truth_set: List[int] = Field(default_factory=list)
    number_sequences: List[List[int]] = Field(default_factory=list)
    formula: Optional[str] = None
    builder: Literal["left", "balanced", "outer", "negconj", "selective"] = "left"
    structural: bool = False
    proof: Optional[ProofFile] = None


# -----------------------------------------------------------------------------
# Suite
# -----------------------------------------------------------------------------

class SuiteCheck(BaseModel):
    id: str
    status: Literal["pass", "fail", "undetermined"]
    samples: int = 0
    failures: int = 0
    undetermined: int = 0
    details: List[str] = Field(default_factory=list)


class SuiteReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    seed: int
    budget: int
    variant: str
    checks: List[SuiteCheck] = Field(default_factory=list)

    @computed_field  # type: ignore[misc]
    @property
    def status(self) -> str:
        return worst_status([check.status for check in self.checks])


def envelope(kind: str, payload: BaseModel | Dict[str, Any]) -> Dict[str, Any]:
    """Top-level JSON document written by the command line."""
    body = payload.model_dump(mode="json") if isinstance(payload, BaseModel) else dict(payload)
    return {"schema_version": SCHEMA_VERSION, "kind": kind, **body}
