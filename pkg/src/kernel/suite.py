"""Reproducible acceptance suite.

Each check draws from its own seeded stream, so filtering with ``only``
does not change what the remaining checks see. Reports carry counts and
short details only; wall times go to the log.
"""

from __future__ import annotations

import logging
import random
from collections.abc import Callable
from typing import Optional

from ..models import STATUS_FAIL, STATUS_PASS, STATUS_UNDETERMINED, ApproxTrace, SuiteCheck, SuiteReport
from .budgets import LabProfile
from .coding import decode, encode, num
from .constants import CHECK_IDS, CHECK_TITLES
from .countermodels import audit_construction, construct_A, construct_B
from .derivations import (
    PropProof,
    check_proof,
    check_yablo_claim,
    replay_dc_to_seqoind,
    replay_negated_conjunction,
    replay_seqind_to_dcin,
    tagged_disjunction_tautology,
    yablo_transform,
)
from .disjunctions import STANDARD_KINDS, BuilderKind, bigvee, builder
from .errors import (
    ConstructionAuditError,
    HypothesisViolation,
    LabError,
    MalformedJustification,
    OracleUndetermined,
    TooManyAtomsError,
)
from .ev_engine import PartialSatClass, complete_presat, compositional_pairs, ev_construct, subformula_closure, validate_sat_class
from .generators import (
    boolean_combination,
    decidable_pool,
    decidable_sequence,
    random_cut_model,
    random_proof,
    random_scenario,
    random_sentence,
    random_tree,
    short_formula,
    yablo_ready,
)
from .oracles import brute_force, mp_accepts
from .principles import check_dc, check_outer_contract, check_qfc, check_ct_minus, evaluated_valuation
from .propositional import is_tautology
from .semantics import DEFAULT_BUDGET, Evaluator, evaluate, term_eval, val, val_seq
from .syntax import And, Eq, Exists, Forall, Formula, Not, Or, flat_size, parse, parse_term, preview, to_text
from .templates import ext_equiv, template
from .utils import matches_prefix, seeded_rng, timed

logger = logging.getLogger(__name__)

MAX_DETAILS = 10

CheckRunner = Callable[[LabProfile], SuiteCheck]


class _Tally:
    """Counters for one check; details are capped."""

    def __init__(self, check_id: str):
        self.check_id = check_id
        self.samples = 0
        self.failures = 0
        self.undetermined = 0
        self.details: list[str] = []

    def note(self, message: str) -> None:
        if len(self.details) < MAX_DETAILS:
            self.details.append(message)

    def fail(self, message: str) -> None:
        self.failures += 1
        self.note(message)

    def result(self, count_undetermined: bool = True) -> SuiteCheck:
        if self.failures:
            status = STATUS_FAIL
        elif self.undetermined and count_undetermined:
            status = STATUS_UNDETERMINED
        else:
            status = STATUS_PASS
        return SuiteCheck(
            id=self.check_id,
            status=status,
            samples=self.samples,
            failures=self.failures,
            undetermined=self.undetermined,
            details=self.details,
        )


def _ground_truth() -> Evaluator:
    """Evaluator for generating inputs; independent of the profile budget."""

    return Evaluator(DEFAULT_BUDGET)


# -----------------------------------------------------------------------------
# Worked examples, coding and the evaluator
# -----------------------------------------------------------------------------


def run_examples(profile: LabProfile) -> SuiteCheck:
    tally = _Tally("examples")
    cases: list[tuple[str, object, object]] = []
    cases.append(("val(S0+SS0)", val(parse_term("(S(0)+S(S(0)))")), 3))
    cases.append(("SSx*Sy at x=2, y=5", term_eval(parse_term("(S(S(x))*S(y))"), {0: 2, 1: 5}), 24))
    source = parse("E x.((S(S(x))+S(y))=((z*(y+S(0)))*x))")
    shape = template(source)
    cases.append(("template", to_text(shape.template), "E x2.((S(S(x2))+x0)=(x1*x2))"))
    cases.append(("template slots", [to_text(slot) for slot in shape.slots], ["S(x1)", "(x2*(x1+S(0)))"]))
    witness = ext_equiv(
        (parse("E x.((x+y)=S(S(0)))"), {1: 2}),
        (parse("E x.((x+(u*v))=(w+S(0)))"), {1: 2, 2: 1, 3: 1}),
    )
    if witness is None:
        cases.append(("ext_equiv", None, "a witness"))
    else:
        cases.append(("ext_equiv template", to_text(witness.template), "E x2.((x2+x0)=x1)"))
        cases.append(("ext_equiv values", (val_seq(witness.left), val_seq(witness.right)), ([2, 2], [2, 2])))
        cases.append(("ext_equiv right slots", [to_text(t) for t in witness.right], ["(S(S(0))*S(0))", "(S(0)+S(0))"]))
    cases.append(("E x0.(x0=S(0))", evaluate(parse("E x0.(x0=S(0))"), 8).verdict, "true"))
    for label, got, expected in cases:
        tally.samples += 1
        if got != expected:
            tally.fail(f"{label}: got {got!r}, expected {expected!r}")
    return tally.result()


def run_coding(profile: LabProfile) -> SuiteCheck:
    tally = _Tally("coding")
    rng = seeded_rng(profile.seed, "coding")
    for _ in range(profile.suite.coding_samples):
        node = random_tree(rng, profile.suite.coding_depth)
        tally.samples += 1
        if decode(encode(node)) != node:
            tally.fail(f"roundtrip changed {preview(node)}")
    return tally.result()


def run_oracle(profile: LabProfile) -> SuiteCheck:
    tally = _Tally("oracle")
    rng = seeded_rng(profile.seed, "oracle")
    engine = Evaluator(profile.evaluation.budget)
    bound = profile.suite.oracle_bound
    for _ in range(profile.suite.oracle_samples):
        phi = random_sentence(rng, bound=bound)
        tally.samples += 1
        mine, reference = engine(phi), brute_force(phi, bound)
        if mine is None or reference is None:
            tally.undetermined += 1
            continue
        if mine != reference:
            tally.fail(f"{preview(phi)}: evaluate says {mine}, enumeration says {reference}")
    tally.note(f"{tally.undetermined} sentences left undetermined by one side")
    return tally.result(count_undetermined=False)


# -----------------------------------------------------------------------------
# Disjunctions, psi-sequences and outer disjunctions
# -----------------------------------------------------------------------------


def _decidable_samples(rng: random.Random, count: int, max_length: int, min_length: int = 1) -> list[list[Formula]]:
    generator_engine = _ground_truth()
    samples = []
    for _ in range(count):
        pool = decidable_pool(rng, 6, generator_engine)
        samples.append(decidable_sequence(rng, pool, rng.randint(min_length, max_length)))
    return samples


def run_dc(profile: LabProfile) -> SuiteCheck:
    tally = _Tally("dc")
    rng = seeded_rng(profile.seed, "dc")
    engine = Evaluator(profile.evaluation.budget)
    samples = _decidable_samples(rng, profile.suite.dc_samples, profile.suite.dc_max_length)
    for kind in STANDARD_KINDS:
        build = builder(kind)
        for seq in samples:
            tally.samples += 1
            whole = engine(build(seq))
            parts = [engine(phi) for phi in seq]
            if whole is None or None in parts:
                tally.undetermined += 1
                continue
            if whole != any(parts):
                tally.fail(f"{build.name} on {len(seq)} disjuncts: D is {whole}, some disjunct true is {any(parts)}")

    replays = (replay_seqind_to_dcin, replay_dc_to_seqoind, replay_negated_conjunction)
    for seq in samples:
        for replay in replays:
            tally.samples += 1
            try:
                outcome = replay(seq, engine)
            except OracleUndetermined:
                tally.undetermined += 1
                continue
            if not outcome.confirmed:
                reason = "; ".join(outcome.steps[-1:] + outcome.notes[-1:])
                tally.fail(f"{outcome.name} on {len(seq)} sentences: {reason}")
    return tally.result()


def run_yablo(profile: LabProfile) -> SuiteCheck:
    tally = _Tally("yablo")
    rng = seeded_rng(profile.seed, "yablo")
    generator_engine = _ground_truth()
    budget = profile.evaluation.budget
    for _ in range(profile.suite.yablo_samples):
        pool = decidable_pool(rng, 6, generator_engine)
        phis = yablo_ready(rng, pool, rng.randint(1, profile.suite.yablo_max_length), generator_engine)
        ys = yablo_transform(phis)
        tally.samples += 1
        try:
            report = check_yablo_claim(ys, budget)
        except HypothesisViolation:
            tally.undetermined += 1
            continue
        if not report.passed or report.append_audit:
            tally.fail(f"length {report.length}: first failure {report.first_failure} ({report.failure_kind})")
        limit = 10 * (len(phis) - 1 + report.source_size)
        if report.dag_size > limit:
            tally.fail(f"length {report.length}: {report.dag_size} shared nodes exceed {limit}")

    length = profile.suite.yablo_flat_length
    tally.samples += 1
    ys = yablo_transform([parse("0=0")] * (length + 1))
    measured = flat_size(ys.derived[length])
    if measured <= 2 ** (length - 1):
        tally.fail(f"flat size of psi_{length} is only {measured}")
    else:
        tally.note(f"flat size of psi_{length}: {measured}")
    return tally.result()


def run_outer(profile: LabProfile) -> SuiteCheck:
    tally = _Tally("outer")
    rng = seeded_rng(profile.seed, "outer")
    engine = Evaluator(profile.evaluation.budget)
    outer = builder(BuilderKind.OUTER)
    for seq in _decidable_samples(rng, profile.suite.outer_samples, profile.suite.outer_max_length):
        tally.samples += 1
        try:
            report = check_outer_contract(outer, engine, [seq])
        except OracleUndetermined:
            tally.undetermined += 1
            continue
        for violation in report.violations:
            tally.fail(f"{violation.family}: {violation.explanation}")

    generator_engine = _ground_truth()
    for c in range(profile.suite.tautology_max_length + 1):
        pool = decidable_pool(rng, 6, generator_engine)
        tally.samples += 1
        try:
            holds = is_tautology(tagged_disjunction_tautology(decidable_sequence(rng, pool, c + 1)), profile.evaluation.atom_limit)
        except TooManyAtomsError as exc:
            tally.fail(f"c={c}: {exc}")
            continue
        if not holds:
            tally.fail(f"c={c}: the tautology instance has a countervaluation")
    return tally.result()


def run_balanced(profile: LabProfile) -> SuiteCheck:
    tally = _Tally("balanced")
    rng = seeded_rng(profile.seed, "balanced")
    engine = Evaluator(profile.evaluation.budget)
    balanced = builder(BuilderKind.BALANCED)
    a, b, c = parse("0=0"), parse("S(0)=0"), parse("0=S(0)")

    tally.samples += 1
    if balanced([a, b, c]) == Or(balanced([a, b]), c):
        tally.fail("D([a,b,c]) coincides with D([a,b]) | c")
    tally.samples += 1
    structural = check_outer_contract(balanced, engine, [[a, b, c]], structural=True)
    if "append-structure" not in structural.families():
        tally.fail("the structural append clause did not fail on [a,b,c]")

    for seq in _decidable_samples(rng, profile.suite.dc_samples, profile.suite.dc_max_length, min_length=2):
        tally.samples += 1
        try:
            report = check_outer_contract(balanced, engine, [seq])
        except OracleUndetermined:
            tally.undetermined += 1
            continue
        if {"outer", "biconditional"} & report.families():
            tally.fail(f"biconditional fails on {len(seq)} disjuncts")
    return tally.result()


# -----------------------------------------------------------------------------
# Satisfaction classes and cut models
# -----------------------------------------------------------------------------


def run_ev(profile: LabProfile) -> SuiteCheck:
    tally = _Tally("ev")
    rng = seeded_rng(profile.seed, "ev")
    limits = profile.ev
    for index in range(profile.suite.ev_samples):
        scenario = random_scenario(rng, limits)
        tally.samples += 1
        try:
            _, report = ev_construct(scenario)
        except ConstructionAuditError as exc:
            tally.fail(f"scenario {index}: {exc}")
            continue
        except LabError as exc:
            tally.fail(f"scenario {index}: {exc}")
            continue
        if report.environment > limits.max_environment or report.classes > limits.max_classes:
            tally.fail(f"scenario {index}: {report.environment} formulas in {report.classes} classes")
        if report.stages > report.classes:
            tally.fail(f"scenario {index}: {report.stages} stages for {report.classes} classes")
    return tally.result()


def _cutmodel_check(profile: LabProfile, which: str) -> SuiteCheck:
    tally = _Tally(f"construction-{which.lower()}")
    rng = seeded_rng(profile.seed, tally.check_id)
    skipped = 0
    for index in range(profile.suite.cutmodel_samples):
        model = random_cut_model(rng, profile.cutmodel)
        tally.samples += 1
        try:
            if which == "A":
                trace = construct_A(model)
            else:
                trace = construct_B(model, profile.cutmodel.threshold_divisor)
        except LabError as exc:
            tally.fail(f"model {index}: {exc}")
            continue
        skipped += len(trace.skips)
        audit = audit_construction(trace, model, which)  # type: ignore[arg-type]
        for violation in audit.violations:
            tally.fail(f"model {index}: {violation.family} at {violation.instance}")
    if which == "B":
        tally.note(f"{skipped} long sequences skipped")
    return tally.result()


def run_construction_a(profile: LabProfile) -> SuiteCheck:
    return _cutmodel_check(profile, "A")


def run_construction_b(profile: LabProfile) -> SuiteCheck:
    return _cutmodel_check(profile, "B")


# -----------------------------------------------------------------------------
# Fault injection
# -----------------------------------------------------------------------------

_CONSTRUCTOR_FAMILY = {Eq: "atomic", Not: "negation", Or: "disjunction", And: "conjunction", Exists: "existential", Forall: "universal"}


def _inject_ctminus(rng: random.Random, profile: LabProfile) -> tuple[str, set[str]]:
    pool = decidable_pool(rng, 6, _ground_truth())
    budget = profile.evaluation.closure_budget
    v = evaluated_valuation(decidable_sequence(rng, pool, 3), budget, "numeral")
    target = rng.choice(list(v))
    expected = _CONSTRUCTOR_FAMILY[type(target)]
    report = check_ct_minus(v.flipped(target), "numeral", budget)
    return expected, report.families()


def _inject_dc(rng: random.Random, profile: LabProfile) -> tuple[str, set[str]]:
    pool = decidable_pool(rng, 6, _ground_truth())
    seq = decidable_sequence(rng, pool, rng.randint(2, 6))
    whole = bigvee(seq)
    v = evaluated_valuation([whole, *seq], profile.evaluation.closure_budget)
    expected = "dcin" if any(v[phi] for phi in seq) else "dcout"
    return expected, check_dc(v.flipped(whole), [seq]).families()


def _inject_qfc(rng: random.Random, profile: LabProfile) -> tuple[str, set[str]]:
    engine = Evaluator(0)
    phi = boolean_combination(rng, [Eq(num(k), num(1)) for k in range(3)])
    if not engine(phi):
        phi = Not(phi)
    v = evaluated_valuation([phi], profile.evaluation.closure_budget)
    return "qfc", check_qfc(v.flipped(phi)).families()


def _inject_outer(rng: random.Random, profile: LabProfile) -> tuple[str, set[str]]:
    engine = _ground_truth()
    pool = decidable_pool(rng, 6, engine)
    seq = decidable_sequence(rng, pool, rng.randint(2, 6))
    build = builder(rng.choice(STANDARD_KINDS))
    whole = build(seq)

    def perturbed(phi: Formula) -> Optional[bool]:
        value = engine(phi)
        if phi == whole and value is not None:
            return not value
        return value

    return "biconditional", check_outer_contract(build, perturbed, [seq]).families()


def _inject_sat_class(rng: random.Random, profile: LabProfile) -> tuple[str, set[str]]:
    universe = profile.ev.universe
    while True:
        domain = subformula_closure([short_formula(rng, 2)])
        sat = complete_presat(compositional_pairs(domain, universe), domain, universe)
        removable = sorted(
            (pair for pair in sat.pairs if pair[0] in sat.domain),
            key=lambda pair: (to_text(pair[0]), tuple(sorted(pair[1].items()))),
        )
        if removable:
            break
    dropped = rng.choice(removable)
    damaged = PartialSatClass(sat.pairs - {dropped}, sat.domain, universe)
    return "comp", {violation.family for violation in validate_sat_class(damaged).violations}


def _inject_trace(rng: random.Random, profile: LabProfile, which: str) -> tuple[str, set[str]]:
    model = random_cut_model(rng, profile.cutmodel)
    threshold = model.effective_threshold(profile.cutmodel.threshold_divisor)
    model.sequences.append([model.cut])
    model.sequences.append(list(range(max(0, model.cut - 5), min(model.size, model.cut + threshold + 5))))
    trace: ApproxTrace = construct_A(model) if which == "A" else construct_B(model, profile.cutmodel.threshold_divisor)
    extended = [step for step in trace.steps if step.branch == "extend"]
    if extended and rng.random() < 0.5:
        trace.final_t = sorted(set(trace.final_t) | {rng.choice(extended).added_b})
        expected = "disjointness"
    else:
        victim = rng.choice(extended).added_a if extended else trace.final_t[0]
        trace.final_t = sorted(set(trace.final_t) - {victim})
        expected = "final"
    return expected, audit_construction(trace, model, which).families()  # type: ignore[arg-type]


_INJECTIONS: tuple[tuple[str, Callable[[random.Random, LabProfile], tuple[str, set[str]]]], ...] = (
    ("ctminus", _inject_ctminus),
    ("dc", _inject_dc),
    ("qfc", _inject_qfc),
    ("outer", _inject_outer),
    ("sat-class", _inject_sat_class),
    ("construction-a", lambda rng, profile: _inject_trace(rng, profile, "A")),
    ("construction-b", lambda rng, profile: _inject_trace(rng, profile, "B")),
)

# On finite data their hypotheses imply their conclusions, so no fault can be planted.
_UNINJECTED = "seqind, seqoind and int are not injected: they cannot fail on finite data"


def run_injection(profile: LabProfile) -> SuiteCheck:
    tally = _Tally("injection")
    rng = seeded_rng(profile.seed, "injection")
    tally.note(_UNINJECTED)
    for index in range(profile.suite.injections):
        name, inject = _INJECTIONS[index % len(_INJECTIONS)]
        tally.samples += 1
        try:
            expected, families = inject(rng, profile)
        except LabError as exc:
            tally.fail(f"injection {index} ({name}): {exc}")
            continue
        if expected not in families:
            tally.fail(f"injection {index} ({name}): expected {expected}, got {sorted(families)}")
    return tally.result()


# -----------------------------------------------------------------------------
# Proofs and determinism
# -----------------------------------------------------------------------------


def run_proofs(profile: LabProfile) -> SuiteCheck:
    tally = _Tally("proof")
    rng = seeded_rng(profile.seed, "proof")
    engine = Evaluator(profile.evaluation.budget)
    generator_engine = _ground_truth()
    for index in range(profile.suite.proof_samples):
        pool = decidable_pool(rng, 6, generator_engine)
        data = random_proof(rng, pool, profile.suite.proof_max_lines)
        tally.samples += 1
        try:
            check_proof(PropProof.from_file(data), engine, profile.evaluation.atom_limit)
            accepted = True
        except MalformedJustification:
            accepted = False
        if accepted != mp_accepts(data):
            tally.fail(f"proof {index}: checker says {accepted}, closure says {not accepted}")
    return tally.result()


def run_determinism(profile: LabProfile) -> SuiteCheck:
    tally = _Tally("determinism")

    def draw() -> list[str]:
        rng = seeded_rng(profile.seed, "determinism")
        scenario = random_scenario(rng, profile.ev)
        return [
            to_text(random_tree(rng, 6)),
            to_text(random_sentence(rng)),
            scenario.to_file().model_dump_json(),
            random_cut_model(rng, profile.cutmodel).model_dump_json(),
        ]

    first, second = draw(), draw()
    for position, (left, right) in enumerate(zip(first, second)):
        tally.samples += 1
        if left != right:
            tally.fail(f"draw {position} differs between runs")
    return tally.result()


_CHECKS: dict[str, CheckRunner] = {
    "balanced": run_balanced,
    "coding": run_coding,
    "construction-a": run_construction_a,
    "construction-b": run_construction_b,
    "dc": run_dc,
    "determinism": run_determinism,
    "ev": run_ev,
    "examples": run_examples,
    "injection": run_injection,
    "oracle": run_oracle,
    "outer": run_outer,
    "proof": run_proofs,
    "yablo": run_yablo,
}


def run_suite(profile: LabProfile, only: Optional[str] = None) -> SuiteReport:
    """Run every check whose id starts with one of the comma-separated prefixes in ``only``."""

    report = SuiteReport(seed=profile.seed, budget=profile.evaluation.budget, variant=profile.variant)
    for check_id in CHECK_IDS:
        if not matches_prefix(check_id, only):
            continue
        logger.info("[suite] %s: %s", check_id, CHECK_TITLES[check_id])
        with timed(logger, f"suite:{check_id}"):
            report.checks.append(_CHECKS[check_id](profile))
    return report
