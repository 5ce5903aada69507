"""Satisfaction classes and the finite stage of the satisfaction-class extension.

At desk scale an assignment for ``phi`` maps exactly ``FV(phi)`` into
``[0, universe)`` and quantifier clauses range over the same universe, while
equations are evaluated over the naturals. "Nonstandardly many disjuncts"
is simulated by a spine count of at least ``long_cut``.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Literal

from ..models import (
    BaseRecord,
    EVReport,
    PairRecord,
    PrincipleReport,
    SatClassReport,
    ScenarioFile,
    SchemeAudit,
    Violation,
)
from .disjunctions import balanced_count, spine_count
from .errors import ClassCycleError, ConstructionAuditError, MultiVariableError, NotPresatError, ScenarioError
from .semantics import term_eval
from .syntax import (
    And,
    Assignment,
    Eq,
    Exists,
    Forall,
    Formula,
    Not,
    Or,
    direct_subformulas,
    parse,
    preview,
    to_text,
)
from .templates import SyntacticTemplate, Witness, ext_equiv, fill, regularity_key, similar, template, template_defects

logger = logging.getLogger(__name__)

__all__ = [
    "ClassGraph",
    "EVScenario",
    "PartialSatClass",
    "SyntacticTemplate",
    "Witness",
    "assignments",
    "check_internal_induction",
    "class_graph",
    "complete_presat",
    "comp_value",
    "compositional_pairs",
    "ev_construct",
    "ext_equiv",
    "fill",
    "greatest_domain",
    "similar",
    "template",
    "template_defects",
    "validate_sat_class",
]

Pair = tuple[Formula, Assignment]
Policy = Literal["satisfy", "falsify-balanced"]
Member = Callable[[Formula, Mapping[int, int]], bool]


# -----------------------------------------------------------------------------
# Assignments and compositional clauses
# -----------------------------------------------------------------------------


@lru_cache(maxsize=4096)
def assignments(phi: Formula, universe: int) -> tuple[Assignment, ...]:
    """Asn(phi): every map from FV(phi) into [0, universe)."""

    variables = sorted(phi.free)
    return tuple(
        Assignment(zip(variables, values))
        for values in product(range(universe), repeat=len(variables))
    )


def _restrict(alpha: Mapping[int, int], phi: Formula) -> Assignment:
    if isinstance(alpha, Assignment) and len(alpha) == len(phi.free):
        return alpha
    return Assignment({index: alpha[index] for index in phi.free})


def membership(pairs: set[Pair] | frozenset[Pair]) -> Member:
    def member(phi: Formula, alpha: Mapping[int, int]) -> bool:
        return (phi, _restrict(alpha, phi)) in pairs

    return member


def comp_value(phi: Formula, alpha: Mapping[int, int], member: Member, universe: int) -> bool:
    """Membership of (phi, alpha) demanded by the clause for phi's main constructor."""

    match phi:
        case Eq(left, right):
            return term_eval(left, alpha) == term_eval(right, alpha)
        case Not(body):
            return not member(body, alpha)
        case Or(left, right):
            return member(left, alpha) or member(right, alpha)
        case And(left, right):
            return member(left, alpha) and member(right, alpha)
        case Exists(var, body):
            return any(member(body, {**alpha, var: x}) for x in range(universe))
        case Forall(var, body):
            return all(member(body, {**alpha, var: x}) for x in range(universe))
    raise TypeError(f"not a formula: {phi!r}")


def _comp_failure(phi: Formula, member: Member, universe: int) -> Assignment | None:
    for alpha in assignments(phi, universe):
        if member(phi, alpha) != comp_value(phi, alpha, member, universe):
            return alpha
    return None


def compositional_pairs(
    formulas: Iterable[Formula],
    universe: int,
    seeded: Callable[[Formula], bool | None] = lambda phi: None,
) -> set[Pair]:
    """Pairs given by the clauses on a subformula-closed set, bottom up.

    ``seeded`` fixes the value of a formula for every assignment when it
    returns a bool.
    """

    pending = sorted(set(formulas), key=lambda phi: phi.size)
    pairs: set[Pair] = set()
    member = membership(pairs)
    for phi in pending:
        fixed = seeded(phi)
        for alpha in assignments(phi, universe):
            value = fixed if fixed is not None else comp_value(phi, alpha, member, universe)
            if value:
                pairs.add((phi, alpha))
    return pairs


# -----------------------------------------------------------------------------
# Satisfaction classes
# -----------------------------------------------------------------------------


@dataclass(frozen=True)
class PartialSatClass:
    pairs: frozenset[Pair] = frozenset()
    domain: frozenset[Formula] = frozenset()
    universe: int = 3

    def holds(self, phi: Formula, alpha: Mapping[int, int]) -> bool:
        return (phi, _restrict(alpha, phi)) in self.pairs

    def formulas(self) -> set[Formula]:
        return {phi for phi, _ in self.pairs}

    def to_records(self) -> list[PairRecord]:
        records = [PairRecord(formula=to_text(phi), assignment=alpha.to_json()) for phi, alpha in self.pairs]
        return sorted(records, key=lambda record: (record.formula, sorted(record.assignment.items())))

    def to_base_record(self) -> BaseRecord:
        return BaseRecord(domain=sorted(to_text(phi) for phi in self.domain), pairs=self.to_records())


def _pair_list(pairs: Iterable[tuple[Formula, Mapping[int, int]]]) -> list[Pair]:
    return [(phi, alpha if isinstance(alpha, Assignment) else Assignment(alpha)) for phi, alpha in pairs]


def _sorted_formulas(formulas: Iterable[Formula]) -> list[Formula]:
    return sorted(formulas, key=lambda phi: (phi.size, to_text(phi)))


def _regularity_clashes(
    formulas: Iterable[Formula],
    member: Member,
    universe: int,
) -> list[tuple[Formula, Assignment, Formula, Assignment]]:
    """(phi, alpha, psi, beta) with (phi, alpha) ~= (psi, beta) but different membership."""

    seen: dict[tuple, tuple[bool, Formula, Assignment]] = {}
    clashes = []
    for phi in _sorted_formulas(formulas):
        for alpha in assignments(phi, universe):
            key = regularity_key(phi, alpha)
            value = member(phi, alpha)
            first = seen.setdefault(key, (value, phi, alpha))
            if first[0] != value:
                clashes.append((first[1], first[2], phi, alpha))
    return clashes


def validate_sat_class(
    sat: PartialSatClass,
    regularity: bool = False,
    environment: Iterable[Formula] | None = None,
) -> SatClassReport:
    """Check every condition of a satisfaction class on finite data."""

    report = SatClassReport(pairs=len(sat.pairs), domain=len(sat.domain))
    member = membership(sat.pairs)
    universe = sat.universe

    def violate(family: str, phi: Formula, explanation: str) -> None:
        report.violations.append(Violation(family=family, instance=preview(phi), explanation=explanation))

    for phi, alpha in sorted(sat.pairs, key=lambda pair: (to_text(pair[0]), tuple(sorted(pair[1].items())))):
        if set(alpha) != set(phi.free) or any(value >= universe for value in alpha.values()):
            violate("assignment", phi, f"{alpha!r} is not an assignment for the formula")
        if phi not in sat.domain and not (isinstance(phi, Not) and phi.body in sat.domain):
            violate("domain", phi, "has pairs but neither it nor its negated body is in the domain")

    for phi in _sorted_formulas(sat.domain):
        for sub in direct_subformulas(phi):
            if sub not in sat.domain:
                violate("closure", phi, f"direct subformula {preview(sub)} is not in the domain")
        for alpha in assignments(phi, universe):
            if not member(phi, alpha) and not member(Not(phi), alpha):
                violate("totality", phi, f"neither it nor its negation holds under {alpha!r}")
                break

    for phi in _sorted_formulas(sat.domain | sat.formulas()):
        alpha = _comp_failure(phi, member, universe)
        if alpha is not None:
            violate("comp", phi, f"the compositional clause fails under {alpha!r}")

    if environment is not None:
        allowed = set(environment)
        for phi in _sorted_formulas(sat.domain - allowed):
            violate("environment", phi, "domain formula outside the environment")

    if regularity:
        field_formulas = set(sat.domain) | {Not(phi) for phi in sat.domain}
        for phi, alpha, psi, beta in _regularity_clashes(field_formulas, member, universe):
            violate("regularity", psi, f"{beta!r} is equivalent to {preview(phi)} under {alpha!r} but membership differs")
    return report


def greatest_domain(pairs: Iterable[Pair], candidates: Iterable[Formula], universe: int) -> frozenset[Formula]:
    """Largest subformula-closed subset of ``candidates`` on which the clauses hold."""

    all_pairs = set(pairs)
    current = set(candidates)
    while True:
        kept = {phi for phi in current if all(sub in current for sub in direct_subformulas(phi))}
        member = membership({pair for pair in all_pairs if pair[0] in kept})
        kept = {phi for phi in kept if _comp_failure(phi, member, universe) is None}
        if kept == current:
            return frozenset(kept)
        current = kept


def complete_presat(
    pairs: Iterable[tuple[Formula, Mapping[int, int]]],
    domain: Iterable[Formula],
    universe: int = 3,
    candidates: Iterable[Formula] = (),
) -> PartialSatClass:
    """Add (!phi, alpha) for every domain formula phi that alpha does not satisfy.

    ``candidates`` may enlarge the domain up to the greatest set on which the
    clauses hold.
    """

    pair_set = set(_pair_list(pairs))
    domain = frozenset(domain)
    for phi, alpha in pair_set:
        if set(alpha) != set(phi.free) or any(value >= universe for value in alpha.values()):
            raise NotPresatError("assignment", f"{alpha!r} is not an assignment for {preview(phi)}")
        if phi not in domain:
            raise NotPresatError("domain", f"{preview(phi)} has pairs but is not in the domain")
    for phi in domain:
        for sub in direct_subformulas(phi):
            if sub not in domain:
                raise NotPresatError("closure", f"{preview(sub)} is a direct subformula of {preview(phi)} outside the domain")
    member = membership(pair_set)
    for phi in _sorted_formulas(domain):
        alpha = _comp_failure(phi, member, universe)
        if alpha is not None:
            raise NotPresatError("comp", f"{preview(phi)} under {alpha!r}")

    full_domain = greatest_domain(pair_set, set(domain) | set(candidates), universe) if candidates else domain
    pair_set = {pair for pair in pair_set if pair[0] in full_domain}
    completed = set(pair_set)
    for phi in full_domain:
        for alpha in assignments(phi, universe):
            if (phi, alpha) not in pair_set:
                completed.add((Not(phi), alpha))
    return PartialSatClass(frozenset(completed), full_domain, universe)


# -----------------------------------------------------------------------------
# Similarity classes
# -----------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassGraph:
    """Similarity classes keyed by template, the subformula order and ranks."""

    classes: dict[Formula, tuple[Formula, ...]]
    order: frozenset[tuple[Formula, Formula]]
    ranks: dict[Formula, int]
    class_of: dict[Formula, Formula] = field(repr=False)

    @property
    def height(self) -> int:
        return max(self.ranks.values(), default=-1) + 1


def class_graph(env: Iterable[Formula], within: Iterable[Formula] | None = None) -> ClassGraph:
    """Partition ``env`` by template; ranks are longest chains in the order.

    ``within`` restricts ranking to the given class keys.
    """

    members: dict[Formula, list[Formula]] = defaultdict(list)
    class_of: dict[Formula, Formula] = {}
    for phi in _sorted_formulas(set(env)):
        key = template(phi).template
        class_of[phi] = key
        members[key].append(phi)
    keys = set(members) if within is None else set(within)

    order: set[tuple[Formula, Formula]] = set()
    for phi, key in class_of.items():
        if key not in keys:
            continue
        for sub in direct_subformulas(phi):
            sub_key = class_of.get(sub)
            if sub_key is not None and sub_key in keys:
                order.add((sub_key, key))

    below: dict[Formula, set[Formula]] = defaultdict(set)
    for low, high in order:
        below[high].add(low)
    ranks: dict[Formula, int] = {}
    visiting: set[Formula] = set()

    def rank(key: Formula) -> int:
        if key in ranks:
            return ranks[key]
        if key in visiting:
            raise ClassCycleError(f"the class of {preview(key)} lies below itself")
        visiting.add(key)
        value = 1 + max((rank(low) for low in below[key]), default=-1)
        visiting.discard(key)
        ranks[key] = value
        return value

    for key in sorted(keys, key=lambda k: (k.size, to_text(k))):
        rank(key)
    classes = {key: tuple(members[key]) for key in keys if key in members}
    return ClassGraph(classes, frozenset(order), ranks, class_of)


# -----------------------------------------------------------------------------
# Scenarios
# -----------------------------------------------------------------------------


@dataclass(frozen=True)
class EVScenario:
    environment: frozenset[Formula]
    base: PartialSatClass
    targets: tuple[Formula, ...]
    long_cut: int = 4
    policy: Policy = "satisfy"

    @property
    def universe(self) -> int:
        return self.base.universe

    def is_long(self, phi: Formula) -> bool:
        if self.policy == "falsify-balanced":
            return balanced_count(phi) >= self.long_cut
        return isinstance(phi, Or) and spine_count(phi) >= self.long_cut

    def seeded_value(self, phi: Formula) -> bool | None:
        if not self.is_long(phi):
            return None
        return self.policy == "satisfy"

    @classmethod
    def from_file(cls, data: ScenarioFile) -> "EVScenario":
        targets = tuple(parse(text) for text in data.targets)
        domain = [parse(text) for text in data.base.domain]
        pairs = [(parse(record.formula), Assignment.from_json(record.assignment)) for record in data.base.pairs]
        if data.complete_base:
            base = complete_presat(pairs, domain, data.universe)
        else:
            base = PartialSatClass(frozenset(_pair_list(pairs)), frozenset(domain), data.universe)
            checked = validate_sat_class(base)
            if not checked.valid:
                first = checked.violations[0]
                raise NotPresatError(first.family, f"{first.instance}: {first.explanation}")
        if data.environment is None:
            environment = subformula_closure([*targets, *base.domain])
        else:
            environment = frozenset(parse(text) for text in data.environment)
        return cls(environment, base, targets, data.long_cut, data.policy)

    def to_file(self) -> ScenarioFile:
        return ScenarioFile(
            environment=[to_text(phi) for phi in _sorted_formulas(self.environment)],
            targets=[to_text(phi) for phi in self.targets],
            base=self.base.to_base_record(),
            long_cut=self.long_cut,
            universe=self.universe,
            policy=self.policy,
            complete_base=False,
        )


def subformula_closure(formulas: Iterable[Formula]) -> frozenset[Formula]:
    seen: set[Formula] = set()
    stack = list(formulas)
    while stack:
        phi = stack.pop()
        if phi in seen:
            continue
        seen.add(phi)
        stack.extend(direct_subformulas(phi))
    return frozenset(seen)


def _check_scenario(sc: EVScenario) -> None:
    env = sc.environment
    for phi in sc.targets:
        if phi not in env:
            raise ScenarioError(f"target {preview(phi)} is not in the environment")
    for phi in sc.base.domain:
        if phi not in env:
            raise ScenarioError(f"base formula {preview(phi)} is not in the environment")
    for phi in env:
        for sub in direct_subformulas(phi):
            if sub not in env:
                raise ScenarioError(f"the environment lacks {preview(sub)}, a direct subformula of {preview(phi)}")
    for phi in sc.targets:
        if not sc.is_long(phi):
            continue
        if sc.policy == "satisfy" and spine_count(phi) == sc.long_cut:
            raise ScenarioError(f"target {preview(phi)} has exactly long_cut={sc.long_cut} disjuncts")
        if sc.policy == "falsify-balanced" and balanced_count(phi) // 2 < sc.long_cut:
            raise ScenarioError(f"target {preview(phi)} splits into a half below long_cut={sc.long_cut}")
    for phi in sc.base.domain:
        fixed = sc.seeded_value(phi)
        if fixed is None:
            continue
        if any(sc.base.holds(phi, alpha) != fixed for alpha in assignments(phi, sc.universe)):
            raise NotPresatError("long-disjunction", f"base gives {preview(phi)} a value other than {fixed}")
    clashes = _regularity_clashes(sc.base.domain, membership(sc.base.pairs), sc.universe)
    if clashes:
        phi, alpha, psi, beta = clashes[0]
        raise NotPresatError("regularity", f"{preview(phi)} under {alpha!r} and {preview(psi)} under {beta!r}")


def _considered(sc: EVScenario) -> set[Formula]:
    targets = set(sc.targets)
    found: set[Formula] = set()
    stack = [sub for phi in sc.targets for sub in direct_subformulas(phi)] + list(sc.targets)
    while stack:
        phi = stack.pop()
        if phi in found:
            continue
        found.add(phi)
        if phi in targets or not sc.is_long(phi):
            stack.extend(direct_subformulas(phi))
    return found


# -----------------------------------------------------------------------------
# Construction
# -----------------------------------------------------------------------------


def ev_construct(sc: EVScenario, include_pairs: bool = False) -> tuple[PartialSatClass, EVReport]:
    """Build the stage relations S_0, ..., S_k and audit the schemes.

    Raises ConstructionAuditError when any audit fails.
    """

    _check_scenario(sc)
    universe = sc.universe
    full = class_graph(sc.environment)
    considered_keys = {full.class_of[phi] for phi in _considered(sc)}
    graph = class_graph(sc.environment, within=considered_keys)
    by_rank: dict[int, list[Formula]] = defaultdict(list)
    for key, value in graph.ranks.items():
        by_rank[value].append(key)

    stage: set[Pair] = set()
    member = membership(stage)
    base_member = membership(sc.base.pairs)
    stage_sizes: list[int] = []
    for rank in range(graph.height):
        for key in sorted(by_rank[rank], key=lambda k: (k.size, to_text(k))):
            for phi in graph.classes[key]:
                fixed = sc.seeded_value(phi)
                for alpha in assignments(phi, universe):
                    if fixed is not None:
                        value = fixed
                    elif rank == 0:
                        value = base_member(phi, alpha) or (
                            isinstance(phi, Eq) and comp_value(phi, alpha, member, universe)
                        )
                    else:
                        value = comp_value(phi, alpha, member, universe)
                    if value:
                        stage.add((phi, alpha))
        if rank == 0:
            _close_minimal(stage, [phi for key in by_rank[0] for phi in graph.classes[key]], universe)
        stage_sizes.append(len(stage))
    logger.debug("[ev] %d classes considered, %d stages, sizes %s", len(considered_keys), graph.height, stage_sizes)

    processed = [phi for key in graph.classes for phi in graph.classes[key]]
    audits = _audits(sc, stage, processed)
    domain = greatest_domain(stage, processed, universe)
    result = complete_presat({pair for pair in stage if pair[0] in domain}, domain, universe)

    report = EVReport(
        environment=len(sc.environment),
        classes=len(full.classes),
        considered_classes=len(considered_keys),
        stages=graph.height,
        stage_sizes=stage_sizes,
        policy=sc.policy,
        long_cut=sc.long_cut,
        audits=audits,
        result_pairs=len(result.pairs),
        result_domain=len(result.domain),
        satisfaction=validate_sat_class(result, regularity=True, environment=sc.environment),
        pairs=result.to_records() if include_pairs else None,
    )
    if not report.passed:
        raise ConstructionAuditError(report)
    return result, report


def _close_minimal(stage: set[Pair], formulas: list[Formula], universe: int) -> None:
    groups: dict[tuple, list[Pair]] = defaultdict(list)
    for phi in formulas:
        for alpha in assignments(phi, universe):
            groups[regularity_key(phi, alpha)].append((phi, alpha))
    for pairs in groups.values():
        if any(pair in stage for pair in pairs):
            stage.update(pairs)


def _audits(sc: EVScenario, stage: set[Pair], processed: list[Formula]) -> list[SchemeAudit]:
    universe = sc.universe
    member = membership(stage)
    audits = [
        SchemeAudit(name="eldiag", status="vacuous", details=["the relation is defined over the finite data itself"]),
        SchemeAudit(name="definitions", status="vacuous", details=["S'_phi are views of S'"]),
    ]

    comp = SchemeAudit(name="compositionality", status="pass")
    for phi in sc.targets:
        comp.instances += 1
        alpha = _comp_failure(phi, member, universe)
        if alpha is not None:
            comp.details.append(f"{preview(phi)} under {alpha!r}")
    audits.append(comp)

    preservation = SchemeAudit(name="preservation", status="pass")
    covered = set(processed)
    for phi, alpha in sorted(sc.base.pairs, key=lambda pair: (to_text(pair[0]), tuple(sorted(pair[1].items())))):
        if phi not in covered:
            continue
        preservation.instances += 1
        if (phi, alpha) not in stage:
            preservation.details.append(f"{preview(phi)} under {alpha!r} was dropped")
    audits.append(preservation)

    regularity = SchemeAudit(name="regularity", status="pass")
    regularity.instances = sum(len(assignments(phi, universe)) for phi in sc.environment)
    for phi, alpha, psi, beta in _regularity_clashes(sc.environment, member, universe):
        regularity.details.append(f"{preview(phi)} under {alpha!r} vs {preview(psi)} under {beta!r}")
    audits.append(regularity)

    induction = SchemeAudit(name="internal-induction", status="pass")
    for phi in sc.targets:
        if len(phi.free) > 1:
            continue
        induction.instances += 1
        checked = check_internal_induction(PartialSatClass(frozenset(stage), frozenset(), universe), phi, universe - 1)
        induction.details.extend(f"{preview(phi)}: {v.explanation}" for v in checked.violations)
    audits.append(induction)

    name = "disjunction" if sc.policy == "satisfy" else "balanced-falsity"
    scheme = SchemeAudit(name=name, status="pass")
    wanted = sc.policy == "satisfy"
    for phi in sc.targets:
        if not sc.is_long(phi):
            continue
        scheme.instances += 1
        wrong = [alpha for alpha in assignments(phi, universe) if member(phi, alpha) != wanted]
        if wrong:
            scheme.details.append(f"{preview(phi)} has value {not wanted} under {wrong[0]!r}")
    audits.append(scheme)

    for audit in audits[2:]:
        if audit.details:
            audit.status = "fail"
        elif not audit.instances:
            audit.status = "vacuous"
    return audits


# -----------------------------------------------------------------------------
# Internal induction
# -----------------------------------------------------------------------------


def check_internal_induction(sat: PartialSatClass, phi: Formula, budget: int) -> PrincipleReport:
    """Induction for the set {x : (phi, [x/v]) in S}, audited up to ``budget``.

    ``phi`` need not be in the domain of ``sat``.
    """

    if len(phi.free) > 1:
        raise MultiVariableError(f"{preview(phi)} has free variables {sorted(phi.free)}")
    report = PrincipleReport(principle="internal-induction")
    label = preview(phi)
    if not phi.free:
        report.instances = 1
        report.notes.append(f"closed formula, membership is {sat.holds(phi, {})}")
        return report
    (var,) = phi.free
    values = [sat.holds(phi, {var: x}) for x in range(budget + 1)]
    report.instances = budget + 1
    broken = [x for x in range(budget) if values[x] and not values[x + 1]]
    if broken:
        report.notes.append(f"broken steps: {broken}")
    if not values[0]:
        report.notes.append("base case fails")
    if values[0] and not broken and not all(values):
        report.violate("internal-induction", label, f"base and steps hold but x{var}={values.index(False)} is missing")
    return report
