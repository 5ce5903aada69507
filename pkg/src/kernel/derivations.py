"""The psi-sequence construction, argument replays and the MP proof checker."""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Optional

from ..models import ProofFile, ProofReport, ReplayReport, Violation, YabloReport
from .coding import num
from .disjunctions import bigvee, bigwedge, negated_conjunction_outer
from .errors import EmptySequenceError, HypothesisViolation, MalformedJustification, OracleUndetermined, TooManyAtomsError
from .principles import Numbering, check_seqind, check_seqoind
from .propositional import DEFAULT_ATOM_LIMIT, is_tautology
from .semantics import Evaluator, TruthOracle
from .syntax import And, Eq, Formula, Not, Or, dag_size, flat_size, parse, preview, sentence_seq, to_text

logger = logging.getLogger(__name__)

Disjoin = Callable[[Sequence[Formula]], Formula]

__all__ = [
    "ModusPonens",
    "Premise",
    "PropProof",
    "YabloSequence",
    "check_proof",
    "check_yablo_claim",
    "implies",
    "is_tautology",
    "tagged_disjunction_tautology",
    "replay_negated_conjunction",
    "replay_seqind_to_dcin",
    "replay_dc_to_seqoind",
    "yablo_transform",
]


def implies(antecedent: Formula, consequent: Formula) -> Formula:
    """``a -> b`` spelled ``!a | b``; no double negation is removed."""

    return Or(Not(antecedent), consequent)


# -----------------------------------------------------------------------------
# psi-sequences
# -----------------------------------------------------------------------------


@dataclass(frozen=True)
class YabloSequence:
    source: tuple[Formula, ...]
    derived: tuple[Formula, ...]
    disjoin: Disjoin = field(default=bigvee, compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.source)


def yablo_transform(phis: Sequence[Formula], disjoin: Disjoin = bigvee) -> YabloSequence:
    """psi_0 = phi_0 and psi_{j+1} = !phi_{j+1} -> (!psi_0 | ... | !psi_j)."""

    source = sentence_seq(phis)
    if not source:
        raise EmptySequenceError("the psi-sequence needs at least one sentence")
    derived = [source[0]]
    negated: list[Formula] = []
    for phi in source[1:]:
        negated.append(Not(derived[-1]))
        derived.append(implies(Not(phi), disjoin(negated)))
    return YabloSequence(source, tuple(derived), disjoin)


def _append_audit(ys: YabloSequence) -> list[Violation]:
    found: list[Violation] = []
    negated = [Not(psi) for psi in ys.derived[:-1]]
    for j in range(1, len(negated)):
        longer = ys.disjoin(negated[: j + 1])
        expected = Or(ys.disjoin(negated[:j]), negated[j])
        if longer != expected:
            found.append(Violation(
                family="append",
                instance=f"prefix {j}",
                explanation="the disjunction of the first j+1 negations is not the disjunction of the first j or the next one",
            ))
    return found


def check_yablo_claim(ys: YabloSequence, budget: int = 64) -> YabloReport:
    """Verify that every psi_j and phi_j is true when phi_0 is true and truth is preserved along the sequence.

    Raises HypothesisViolation when a source sentence is undetermined, phi_0
    is false or some step phi_i -> phi_{i+1} fails.
    """

    engine = Evaluator(budget)
    values: list[bool] = []
    for index, phi in enumerate(ys.source):
        value = engine(phi)
        if value is None:
            raise HypothesisViolation(f"phi_{index} is undetermined under budget {budget}", index=index)
        values.append(value)
    if not values[0]:
        raise HypothesisViolation("phi_0 is false", index=0)
    for index in range(len(values) - 1):
        if values[index] and not values[index + 1]:
            raise HypothesisViolation(f"phi_{index} is true but phi_{index + 1} is false", index=index + 1)

    report = YabloReport(
        length=len(ys),
        budget=budget,
        passed=True,
        append_audit=_append_audit(ys),
        dag_size=dag_size(*ys.derived),
        source_size=sum(dag_size(phi) for phi in ys.source),
        flat_size_last=flat_size(ys.derived[-1]),
    )
    for index, (psi, phi_value) in enumerate(zip(ys.derived, values)):
        if engine(psi) is not True:
            report.passed, report.first_failure, report.failure_kind = False, index, "psi"
            break
        if not phi_value:
            report.passed, report.first_failure, report.failure_kind = False, index, "phi"
            break
    if report.append_audit:
        logger.debug("[yablo] append audit found %d defects", len(report.append_audit))
        if report.passed:
            first = int(report.append_audit[0].instance.split()[-1])
            report.passed, report.first_failure, report.failure_kind = False, first, "append"
    return report


# -----------------------------------------------------------------------------
# Replays
# -----------------------------------------------------------------------------


def _ask(truth: TruthOracle, phi: Formula) -> bool:
    value = truth(phi)
    if value is None:
        raise OracleUndetermined(preview(phi))
    return value


def replay_seqind_to_dcin(phis: Sequence[Formula], truth: TruthOracle) -> ReplayReport:
    """SeqInd gives DCin: from a true disjunct, every longer prefix disjunction is true."""

    phis = list(sentence_seq(phis))
    report = ReplayReport(name="seqind-to-dcin", length=len(phis), confirmed=True)
    values = [_ask(truth, phi) for phi in phis]
    if not any(values):
        report.hypothesis_empty = True
        report.notes.append("no disjunct is true; the chain never fires")
        return report

    start = values.index(True)
    prefixes = [bigvee(phis[: k + 1]) for k in range(start, len(phis))]
    told = [_ask(truth, prefix) for prefix in prefixes]
    report.steps.append(f"base: prefix up to {start} is {told[0]}")
    for offset in range(1, len(prefixes)):
        held = not told[offset - 1] or told[offset]
        report.steps.append(f"step {start + offset - 1} -> {start + offset}: {'holds' if held else 'fails'}")

    numbering = Numbering()
    truth_codes = {numbering(prefix) for prefix, value in zip(prefixes, told) if value}
    chain = check_seqind(truth_codes, [[numbering(prefix) for prefix in prefixes]])
    report.notes.append(f"seqind on the prefix chain: {chain.verdict}")
    report.confirmed = told[-1] and chain.verdict == "pass"
    if not report.confirmed:
        report.notes.append("the full disjunction is not true although a disjunct is")
    return report


def replay_dc_to_seqoind(phis: Sequence[Formula], truth: TruthOracle) -> ReplayReport:
    """DC and SeqInd give SeqOInd through the chain !(!phi_0 | ... | !phi_j)."""

    phis = list(sentence_seq(phis))
    report = ReplayReport(name="dc-to-seqoind", length=len(phis), confirmed=True)
    values = [_ask(truth, phi) for phi in phis]
    progressive = all(values[j] or not all(values[:j]) for j in range(len(values)))
    if not progressive or not phis:
        report.hypothesis_empty = True
        report.notes.append("the sequence is not progressive")
        return report

    negations = [Not(phi) for phi in phis]
    chain = [Not(bigvee(negations[: j + 1])) for j in range(len(phis))]
    told = [_ask(truth, gamma) for gamma in chain]
    for j, value in enumerate(told):
        report.steps.append(f"gamma_{j}: {value}")

    numbering = Numbering()
    gamma_codes = [numbering(gamma) for gamma in chain]
    seqind = check_seqind({code for code, value in zip(gamma_codes, told) if value}, [gamma_codes])
    phi_codes = [numbering(phi) for phi in phis]
    seqoind = check_seqoind({code for code, value in zip(phi_codes, values) if value}, [phi_codes])
    report.notes.append(f"seqind on the auxiliary chain: {seqind.verdict}")
    report.notes.append(f"seqoind on the sequence: {seqoind.verdict}")
    report.confirmed = all(told) and all(values) and seqind.verdict == "pass" and seqoind.verdict == "pass"
    return report


def replay_negated_conjunction(phis: Sequence[Formula], truth: TruthOracle) -> ReplayReport:
    """Both outer-disjunction clauses for !((!p0 & ...) & !pc), via left-grouped conjunctions."""

    phis = list(sentence_seq(phis))
    if not phis:
        raise EmptySequenceError("the replay needs at least one sentence")
    report = ReplayReport(name="negated-conjunction", length=len(phis), confirmed=True)
    values = [_ask(truth, phi) for phi in phis]
    negations = [Not(phi) for phi in phis]
    conjunctions = [bigwedge(negations[: k + 1]) for k in range(len(phis))]
    conj_values = [_ask(truth, conj) for conj in conjunctions]

    for k in range(1, len(phis)):
        outer = _ask(truth, negated_conjunction_outer(phis[: k + 1]))
        previous = _ask(truth, negated_conjunction_outer(phis[:k]))
        if outer != (previous or values[k]):
            report.confirmed = False
            report.steps.append(f"append at {k}: T(D)={outer} but T(D(prefix)) or T(phi_{k}) is {previous or values[k]}")
        if conj_values[k] != (conj_values[k - 1] and _ask(truth, negations[k])):
            report.confirmed = False
            report.steps.append(f"conjunction step {k} breaks the compositional clause")

    whole = _ask(truth, negated_conjunction_outer(phis))
    if whole and not any(values):
        numbering = Numbering()
        codes = [numbering(conj) for conj in conjunctions]
        chain = check_seqind({code for code, value in zip(codes, conj_values) if value}, [codes])
        report.confirmed = False
        report.notes.append(f"D is true with no true disjunct; seqind on the conjunction chain: {chain.verdict}")
    else:
        report.steps.append(f"outer clause: T(D)={whole}, some disjunct true is {any(values)}")
    return report


# -----------------------------------------------------------------------------
# Propositional proofs
# -----------------------------------------------------------------------------


@dataclass(frozen=True)
class Premise:
    pass


@dataclass(frozen=True)
class ModusPonens:
    """Cites the minor premise ``a`` and the major premise ``!a | b``."""

    minor: int
    major: int


Justification = Premise | ModusPonens


@dataclass(frozen=True)
class PropProof:
    lines: tuple[tuple[Formula, Justification], ...]

    @property
    def conclusion(self) -> Optional[Formula]:
        return self.lines[-1][0] if self.lines else None

    @property
    def premises(self) -> list[Formula]:
        return [phi for phi, why in self.lines if isinstance(why, Premise)]

    @classmethod
    def from_file(cls, data: ProofFile) -> "PropProof":
        lines: list[tuple[Formula, Justification]] = []
        for index, line in enumerate(data.lines):
            if line.rule == "premise":
                if line.cites:
                    raise MalformedJustification(index, "a premise cites no lines")
                lines.append((parse(line.formula), Premise()))
                continue
            if len(line.cites) != 2:
                raise MalformedJustification(index, "modus ponens cites exactly two lines")
            lines.append((parse(line.formula), ModusPonens(*line.cites)))
        return cls(tuple(lines))


def _validate(proof: PropProof) -> None:
    for index, (phi, why) in enumerate(proof.lines):
        if not isinstance(phi, Formula) or phi.free:
            raise MalformedJustification(index, "every line must be a sentence")
        if isinstance(why, Premise):
            continue
        for cited in (why.minor, why.major):
            if not 0 <= cited < index:
                raise MalformedJustification(index, f"cites line {cited}, which is not an earlier line")
        minor = proof.lines[why.minor][0]
        major = proof.lines[why.major][0]
        if major != implies(minor, phi):
            raise MalformedJustification(index, f"line {why.major} is not the implication from line {why.minor} to this line")


def check_proof(
    proof: PropProof,
    truth: TruthOracle,
    atom_limit: int = DEFAULT_ATOM_LIMIT,
) -> ProofReport:
    """Validate the derivation, classify it and replay the PropRef instance."""

    _validate(proof)
    conclusion = proof.conclusion
    report = ProofReport(
        valid=True,
        lines=len(proof.lines),
        conclusion=to_text(conclusion) if conclusion is not None else None,
    )
    if conclusion is None:
        report.notes.append("empty proof; a non-empty proof opens with a premise, so no proof is premise-free")
        return report

    try:
        report.propsnd = is_tautology(conclusion, atom_limit)
    except TooManyAtomsError as exc:
        report.notes.append(str(exc))

    premises = proof.premises
    premise_values = [truth(phi) for phi in premises]
    if None in premise_values:
        report.premises_true = None
        report.propref = "undetermined"
        report.notes.append("the oracle is undetermined on a premise")
        return report
    elif all(premise_values):
        report.classification = "PrPropT"
        report.premises_true = True
    else:
        report.premises_true = False
        false_lines = [i for i, (phi, why) in enumerate(proof.lines) if isinstance(why, Premise) and truth(phi) is False]
        report.notes.append(f"premises on lines {false_lines} are not true; PropRef does not apply")
        return report

    line_values = [truth(phi) for phi, _ in proof.lines]
    if None in line_values:
        report.propref = "undetermined"
        report.notes.append(f"the oracle is undetermined on line {line_values.index(None)}")
        return report
    numbering = Numbering()
    codes = [numbering(phi) for phi, _ in proof.lines]
    seqoind = check_seqoind({code for code, value in zip(codes, line_values) if value}, [codes])
    report.notes.append(f"seqoind over the proof lines: {seqoind.verdict}")
    report.propref = "confirmed" if line_values[-1] else "violated"
    return report


def tagged_disjunction_tautology(phis: Sequence[Formula]) -> Formula:
    """(c_0 != c+1 & ... & c_c != c+1) -> !((c_0 = c+1 & p0) | ... | (c_c = c+1 & pc))."""

    if not phis:
        raise EmptySequenceError("the tautology needs at least one sentence")
    beyond = num(len(phis))
    distinct = bigwedge([Not(Eq(num(i), beyond)) for i in range(len(phis))])
    tagged = bigvee([And(Eq(num(i), beyond), phi) for i, phi in enumerate(phis)])
    return implies(distinct, Not(tagged))
