"""Finite truth valuations and instance checkers for the truth principles.

Every checker returns a :class:`~src.models.PrincipleReport`. Violations are
report entries; an instance the finite data cannot decide is recorded as
undetermined rather than guessed.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence
from itertools import count
from typing import Literal, Optional

from ..models import PrincipleReport
from .coding import encode, num
from .disjunctions import DisjunctionBuilder, bigvee
from .errors import ClosureMissError, MultiVariableError, OracleUndetermined
from .propositional import equivalent
from .semantics import Evaluator, TruthOracle, match_bounded, match_comparison, val
from .syntax import (
    Add,
    And,
    Eq,
    Exists,
    Forall,
    Formula,
    Mul,
    Not,
    Or,
    Succ,
    Term,
    Var,
    Zero,
    direct_subformulas,
    preview,
    substitute,
)
from .templates import regularity_key

logger = logging.getLogger(__name__)

Variant = Literal["numeral", "term"]
Direction = Literal["in", "out", "both"]


# -----------------------------------------------------------------------------
# Valuations
# -----------------------------------------------------------------------------


class TruthValuation(Mapping[Formula, bool]):
    """A finite truth predicate: sentence -> bool on a closure set."""

    def __init__(self, values: Mapping[Formula, bool], closure: Iterable[Formula] | None = None):
        self._values = dict(values)
        self.closure = frozenset(closure) if closure is not None else frozenset(self._values)

    def __getitem__(self, phi: Formula) -> bool:
        return self._values[phi]

    def __iter__(self) -> Iterator[Formula]:
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def __call__(self, phi: Formula) -> Optional[bool]:
        return self._values.get(phi)

    def flipped(self, phi: Formula) -> "TruthValuation":
        """Copy with the value of ``phi`` negated."""

        if phi not in self._values:
            raise ClosureMissError(preview(phi))
        return self.with_value(phi, not self._values[phi])

    def with_value(self, phi: Formula, value: bool) -> "TruthValuation":
        values = dict(self._values)
        values[phi] = value
        return TruthValuation(values, self.closure | {phi})


def closed_terms(limit: int) -> list[Term]:
    """The first ``limit`` closed terms ordered by (size, code)."""

    by_size: dict[int, list[Term]] = {1: [Zero()]}
    found = [Zero()]
    size = 1
    while len(found) < limit:
        size += 1
        layer = [Succ(term) for term in by_size[size - 1]]
        for left_size in range(1, size - 1):
            right_size = size - 1 - left_size
            for left in by_size.get(left_size, []):
                for right in by_size.get(right_size, []):
                    layer.append(Add(left, right))
                    layer.append(Mul(left, right))
        layer.sort(key=encode)
        by_size[size] = layer
        found.extend(layer)
    return found[:limit]


def quantifier_instances(
    phi: Exists | Forall,
    budget: int,
    variant: Variant = "numeral",
) -> tuple[list[Formula], bool]:
    """Instances checked for a quantified sentence and whether they are exhaustive.

    Comparisons ``E z.(z+s)=t`` and guarded quantifiers with a bound of at
    most ``budget`` are exhaustive over their range; vacuous quantifiers have
    the body as their single, exhaustive instance.
    """

    var, body = phi.var, phi.body
    if var not in body.free:
        return [body], True

    comparison = match_comparison(phi)
    bounded = match_bounded(phi)
    bound: Optional[int] = None
    if comparison is not None:
        bound = val(comparison[2])
    elif bounded is not None:
        bound = val(bounded[2])
    exhaustive_range = bound is not None and bound <= budget

    if variant == "numeral":
        limit = bound if exhaustive_range else budget
        return [substitute(body, var, num(x)) for x in range(limit + 1)], exhaustive_range

    terms = closed_terms(budget + 1)
    instances = [substitute(body, var, term) for term in terms]
    if not exhaustive_range:
        return instances, False
    covered = {val(term) for term in terms}
    return instances, all(x in covered for x in range(bound + 1))


def closure_of(
    sentences: Iterable[Formula],
    budget: int = 8,
    variant: Variant = "numeral",
) -> list[Formula]:
    """Sentences closed under direct subformulas and checked quantifier instances."""

    seen: dict[Formula, None] = {}
    stack = list(sentences)[::-1]
    while stack:
        phi = stack.pop()
        if phi in seen:
            continue
        seen[phi] = None
        if isinstance(phi, (Exists, Forall)):
            instances, _ = quantifier_instances(phi, budget, variant)
            stack.extend(reversed(instances))
        else:
            stack.extend(reversed(direct_subformulas(phi)))
    return list(seen)


def evaluated_valuation(
    sentences: Iterable[Formula],
    budget: int = 8,
    variant: Variant = "numeral",
    evaluator: Evaluator | None = None,
) -> TruthValuation:
    """Valuation given by evaluation on the closure; undetermined sentences are dropped."""

    engine = evaluator or Evaluator(budget)
    values: dict[Formula, bool] = {}
    dropped = 0
    for phi in closure_of(sentences, budget, variant):
        verdict = engine(phi)
        if verdict is None:
            dropped += 1
            continue
        values[phi] = verdict
    if dropped:
        logger.debug("[valuation] dropped %d undetermined sentences", dropped)
    return TruthValuation(values)


class Numbering:
    """Stable natural numbers for sentences in order of first request."""

    def __init__(self) -> None:
        self._numbers: dict[Formula, int] = {}
        self._next = count()

    def __call__(self, phi: Formula) -> int:
        number = self._numbers.get(phi)
        if number is None:
            number = next(self._next)
            self._numbers[phi] = number
        return number


def truth_set(v: Mapping[Formula, bool], numbering: Callable[[Formula], int] = encode) -> set[int]:
    """Codes of the sentences ``v`` makes true."""

    return {numbering(phi) for phi, value in v.items() if value}


def code_sequences(
    seqs: Iterable[Sequence[Formula]],
    numbering: Callable[[Formula], int] = encode,
) -> list[list[int]]:
    return [[numbering(phi) for phi in seq] for seq in seqs]


# -----------------------------------------------------------------------------
# Compositional clauses
# -----------------------------------------------------------------------------


def check_ct_minus(v: TruthValuation, variant: Variant = "numeral", budget: int = 8) -> PrincipleReport:
    """Audit the compositional clauses and regularity on ``v``'s sentences."""

    report = PrincipleReport(principle=f"ctminus:{variant}")
    for phi, value in v.items():
        report.instances += 1
        label = preview(phi)
        match phi:
            case Eq(left, right):
                expected = val(left) == val(right)
                if value != expected:
                    report.violate("atomic", label, f"T says {value}, the equation is {expected}")
            case Not(body):
                inner = v(body)
                if inner is None:
                    report.undetermined.append(label)
                elif value == inner:
                    report.violate("negation", label, f"T(!phi)={value} but T(phi)={inner}")
            case Or(left, right) | And(left, right):
                _check_binary(report, v, phi, value, label)
            case Exists() | Forall():
                _check_quantifier(report, v, phi, value, label, variant, budget)

    groups: dict[tuple, dict[bool, Formula]] = {}
    for phi, value in v.items():
        groups.setdefault(regularity_key(phi), {}).setdefault(value, phi)
    for members in groups.values():
        if len(members) == 2:
            report.violate(
                "regularity",
                preview(members[True]),
                f"same template and slot values as {preview(members[False])} but a different truth value",
            )
    return report


def _check_binary(report: PrincipleReport, v: TruthValuation, phi: Or | And, value: bool, label: str) -> None:
    family = "disjunction" if isinstance(phi, Or) else "conjunction"
    left, right = v(phi.left), v(phi.right)
    decisive = isinstance(phi, Or)
    if left is None or right is None:
        known = [side for side in (left, right) if side is not None]
        if decisive in known and value != decisive:
            report.violate(family, label, f"a component is {decisive} but T says {value}")
        elif decisive not in known:
            report.undetermined.append(label)
        return
    expected = (left or right) if decisive else (left and right)
    if value != expected:
        report.violate(family, label, f"components are {left}, {right} but T says {value}")


def _check_quantifier(
    report: PrincipleReport,
    v: TruthValuation,
    phi: Exists | Forall,
    value: bool,
    label: str,
    variant: Variant,
    budget: int,
) -> None:
    family = "existential" if isinstance(phi, Exists) else "universal"
    decisive = isinstance(phi, Exists)
    instances, exhaustive = quantifier_instances(phi, budget, variant)
    values = [v(instance) for instance in instances]
    hit = next((instances[i] for i, found in enumerate(values) if found is decisive), None)
    if hit is not None:
        if value != decisive:
            report.violate(family, label, f"instance {preview(hit)} is {decisive} but T says {value}")
        return
    complete = exhaustive and all(found is not None for found in values)
    if complete:
        if value == decisive:
            report.violate(family, label, f"every instance is {not decisive} but T says {value}")
        return
    if value == decisive:
        report.undetermined.append(label)


# -----------------------------------------------------------------------------
# Disjunctive correctness
# -----------------------------------------------------------------------------


def check_dc(v: TruthValuation, seqs: Iterable[Sequence[Formula]], direction: Direction = "both") -> PrincipleReport:
    name = {"in": "dcin", "out": "dcout", "both": "dc"}[direction]
    report = PrincipleReport(principle=name)
    for seq in seqs:
        disjunction = bigvee(seq)
        needed = [disjunction, *seq]
        for phi in needed:
            if v(phi) is None:
                raise ClosureMissError(preview(phi))
        report.instances += 1
        whole = v[disjunction]
        some = any(v[phi] for phi in seq)
        label = preview(disjunction)
        if direction in ("in", "both") and some and not whole:
            report.violate("dcin", label, "a disjunct is true but the disjunction is not")
        if direction in ("out", "both") and whole and not some:
            report.violate("dcout", label, "the disjunction is true but no disjunct is")
    return report


# -----------------------------------------------------------------------------
# Sequential induction
# -----------------------------------------------------------------------------


def check_seqind(truth: set[int] | frozenset[int], seqs: Iterable[Sequence[int]]) -> PrincipleReport:
    """T(s0) and T(s_i) -> T(s_{i+1}) for all i imply T(s_j) for all j."""

    report = PrincipleReport(principle="seqind")
    for position, seq in enumerate(seqs):
        report.instances += 1
        if not seq:
            continue
        hypothesis = seq[0] in truth and all(
            seq[i] not in truth or seq[i + 1] in truth for i in range(len(seq) - 1)
        )
        if hypothesis and not all(entry in truth for entry in seq):
            missing = next(j for j, entry in enumerate(seq) if entry not in truth)
            report.violate("seqind", f"sequence {position}", f"hypothesis holds but entry {missing} is not in T")
    return report


def check_seqoind(truth: set[int] | frozenset[int], seqs: Iterable[Sequence[int]]) -> PrincipleReport:
    """If each entry is in T whenever all earlier ones are, every entry is in T."""

    report = PrincipleReport(principle="seqoind")
    for position, seq in enumerate(seqs):
        report.instances += 1
        progressive = True
        prefix_true = True
        for entry in seq:
            if prefix_true and entry not in truth:
                progressive = False
                break
            prefix_true = prefix_true and entry in truth
        if progressive and not all(entry in truth for entry in seq):
            missing = next(j for j, entry in enumerate(seq) if entry not in truth)
            report.violate("seqoind", f"sequence {position}", f"progressive but entry {missing} is not in T")
    return report


# -----------------------------------------------------------------------------
# Internal induction, quantifier-free correctness
# -----------------------------------------------------------------------------


def check_int(truth: TruthOracle, phi: Formula, budget: int = 8) -> PrincipleReport:
    """Bounded induction audit for ``phi`` with at most one free variable."""

    if len(phi.free) > 1:
        raise MultiVariableError(f"{preview(phi)} has free variables {sorted(phi.free)}")
    report = PrincipleReport(principle="int")
    label = preview(phi)
    if not phi.free:
        report.instances = 1
        value = truth(phi)
        if value is None:
            report.undetermined.append(label)
        else:
            report.notes.append(f"closed formula, T says {value}")
        return report

    (var,) = phi.free
    values: list[Optional[bool]] = [truth(substitute(phi, var, num(x))) for x in range(budget + 1)]
    report.instances = budget + 1
    unknown = [x for x, value in enumerate(values) if value is None]
    if unknown:
        report.undetermined.extend(f"{label} at x{var}={x}" for x in unknown)
        return report
    broken = [x for x in range(budget) if values[x] and not values[x + 1]]
    if broken:
        report.notes.append(f"broken steps: {broken}")
    if not values[0]:
        report.notes.append("base case fails")
    if values[0] and not broken and not all(values):
        first = values.index(False)
        report.violate("int", label, f"base and steps hold but x{var}={first} is not true")
    return report


def check_qfc(v: TruthValuation) -> PrincipleReport:
    """Quantifier-free sentences true by evaluation must be true in ``v``."""

    report = PrincipleReport(principle="qfc")
    engine = Evaluator(0)
    for phi, value in v.items():
        if not phi.quantifier_free:
            continue
        report.instances += 1
        if engine(phi) and not value:
            report.violate("qfc", preview(phi), "true by evaluation but not in T")
    return report


# -----------------------------------------------------------------------------
# Outer disjunctions
# -----------------------------------------------------------------------------


def _ask(truth: TruthOracle, phi: Formula) -> bool:
    value = truth(phi)
    if value is None:
        raise OracleUndetermined(preview(phi))
    return value


_P = Eq(Var(0), Zero())
_Q = Eq(Var(1), Zero())


def append_unfolds(builder: DisjunctionBuilder, phis: Sequence[Formula], psi: Formula, depth: int = 3) -> bool:
    """Whether D(phis + [psi]) unfolds propositionally into D(phis) | psi.

    The extended sentence is opened through Boolean connectives up to
    ``depth`` levels; D(phis) becomes atom P, its negated body becomes !P,
    ``psi`` becomes atom Q and everything else a fresh atom.
    """

    shorter = builder(list(phis))
    longer = builder([*phis, psi])
    negated_body = shorter.body if isinstance(shorter, Not) else None
    q_atom = _P if psi == shorter else _Q
    fresh = count(2)
    fresh_atoms: dict[Formula, Formula] = {}

    def unfold(node: Formula, level: int) -> Formula:
        if node == shorter:
            return _P
        if negated_body is not None and node == negated_body:
            return Not(_P)
        if node == psi:
            return q_atom
        if level > 0:
            match node:
                case Not(body):
                    return Not(unfold(body, level - 1))
                case Or(left, right):
                    return Or(unfold(left, level - 1), unfold(right, level - 1))
                case And(left, right):
                    return And(unfold(left, level - 1), unfold(right, level - 1))
        if node not in fresh_atoms:
            fresh_atoms[node] = Eq(Var(next(fresh)), Zero())
        return fresh_atoms[node]

    return equivalent(unfold(longer, depth), Or(_P, q_atom))


def check_outer_contract(
    builder: DisjunctionBuilder,
    truth: TruthOracle,
    samples: Iterable[Sequence[Formula]],
    structural: bool = False,
) -> PrincipleReport:
    """Append clause, outer clause and the truth biconditional per sample."""

    report = PrincipleReport(principle=f"outer:{builder.name}")
    for seq in samples:
        seq = list(seq)
        if not seq:
            continue
        report.instances += 1
        whole = builder(seq)
        label = preview(whole)
        told = _ask(truth, whole)
        parts = [_ask(truth, phi) for phi in seq]
        if told and not any(parts):
            report.violate("outer", label, "D is true but no component is")
        if told != any(parts):
            report.violate("biconditional", label, f"T(D)={told} but some component true is {any(parts)}")
        if len(seq) < 2:
            continue
        shorter, psi = seq[:-1], seq[-1]
        expected = _ask(truth, builder(shorter)) or parts[-1]
        if told != expected:
            report.violate("append", label, f"T(D(phi+psi))={told} but T(D(phi)) or T(psi) is {expected}")
        if structural and not append_unfolds(builder, shorter, psi):
            report.violate("append-structure", label, "D(phi+psi) does not unfold to D(phi) | psi")
    return report
