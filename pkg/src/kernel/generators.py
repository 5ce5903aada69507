"""Seeded random inputs for the suite and the randomized commands.

Every generator takes an explicit :class:`random.Random`; given the same
stream it returns the same objects.
"""

from __future__ import annotations

import random
from collections.abc import Sequence
from typing import Optional

from ..models import CutModel, ProofFile, ProofLine
from .budgets import CutModelBudget, EVBudget
from .coding import num
from .derivations import implies
from .disjunctions import bigvee, spine_count
from .ev_engine import (
    EVScenario,
    PartialSatClass,
    class_graph,
    complete_presat,
    compositional_pairs,
    subformula_closure,
)
from .semantics import Evaluator, bounded_le
from .syntax import (
    Add,
    And,
    Eq,
    Exists,
    Forall,
    Formula,
    Mul,
    Node,
    Not,
    Or,
    Succ,
    Term,
    Var,
    Zero,
    to_text,
)

# Codes roughly square per unary level and grow eightfold in bit length per
# binary level; trees above this estimate are redrawn.
MAX_CODE_BITS = 1 << 16


# -----------------------------------------------------------------------------
# Arbitrary trees
# -----------------------------------------------------------------------------


def estimated_code_bits(node: Node) -> int:
    memo: dict[Node, int] = {}

    def bits(current: Node) -> int:
        cached = memo.get(current)
        if cached is not None:
            return cached
        match current:
            case Zero() | Var():
                result = 8
            case Succ(arg) | Not(arg):
                result = 4 * bits(arg) + 2
            case Exists(_, body) | Forall(_, body):
                result = 8 * bits(body) + 4
            case _:
                left, right = current.args
                result = 4 * max(bits(left), 2 * bits(right)) + 4
        memo[current] = result
        return result

    return bits(node)


def random_term(rng: random.Random, depth: int, variables: Sequence[int] = (0, 1, 2)) -> Term:
    if depth <= 0 or rng.random() < 0.3:
        if variables and rng.random() < 0.5:
            return Var(rng.choice(list(variables)))
        return Zero()
    kind = rng.randrange(3)
    if kind == 0:
        return Succ(random_term(rng, depth - 1, variables))
    ctor = Add if kind == 1 else Mul
    return ctor(random_term(rng, depth - 1, variables), random_term(rng, depth - 1, variables))


def random_formula(rng: random.Random, depth: int, variables: Sequence[int] = (0, 1, 2)) -> Formula:
    if depth <= 1 or rng.random() < 0.25:
        term_depth = max(0, depth - 1)
        return Eq(random_term(rng, term_depth, variables), random_term(rng, term_depth, variables))
    kind = rng.randrange(5)
    if kind == 0:
        return Not(random_formula(rng, depth - 1, variables))
    if kind in (1, 2):
        ctor = Or if kind == 1 else And
        return ctor(random_formula(rng, depth - 1, variables), random_formula(rng, depth - 1, variables))
    ctor = Exists if kind == 3 else Forall
    return ctor(rng.choice(list(variables)), random_formula(rng, depth - 1, variables))


def random_tree(rng: random.Random, depth: int = 8, max_bits: int = MAX_CODE_BITS) -> Node:
    """A term or formula of depth at most ``depth`` with a tractable code."""

    while True:
        node: Node = random_term(rng, depth) if rng.random() < 0.3 else random_formula(rng, depth)
        if estimated_code_bits(node) <= max_bits:
            return node


# -----------------------------------------------------------------------------
# Sentences with small quantified values
# -----------------------------------------------------------------------------


class _Scope:
    def __init__(self) -> None:
        self.next_var = 0

    def fresh(self) -> int:
        index = self.next_var
        self.next_var += 1
        return index


def _small_term(rng: random.Random, bound_vars: Sequence[int], depth: int = 2) -> Term:
    if depth <= 0 or rng.random() < 0.45:
        if bound_vars and rng.random() < 0.6:
            return Var(rng.choice(list(bound_vars)))
        return num(rng.randint(0, 3))
    kind = rng.randrange(4)
    if kind == 0:
        return Succ(_small_term(rng, bound_vars, depth - 1))
    if kind == 3:
        return Mul(_small_term(rng, bound_vars, 0), _small_term(rng, bound_vars, 0))
    return Add(_small_term(rng, bound_vars, depth - 1), _small_term(rng, bound_vars, depth - 1))


def random_sentence(
    rng: random.Random,
    depth: int = 3,
    bound: int = 8,
    quantifiers: int = 2,
    unbounded: bool = True,
) -> Formula:
    """A sentence whose guarded quantifiers range over values at most ``bound``.

    At most ``quantifiers`` quantifiers are nested; when ``unbounded`` is set
    some quantifiers carry no guard.
    """

    scope = _Scope()

    def build(level: int, bound_vars: tuple[int, ...], nesting: int) -> Formula:
        if level <= 0 or rng.random() < 0.3:
            return Eq(_small_term(rng, bound_vars), _small_term(rng, bound_vars))
        kind = rng.randrange(6 if nesting < quantifiers else 3)
        if kind == 0:
            return Not(build(level - 1, bound_vars, nesting))
        if kind in (1, 2):
            ctor = Or if kind == 1 else And
            return ctor(build(level - 1, bound_vars, nesting), build(level - 1, bound_vars, nesting))
        var = scope.fresh()
        inner = bound_vars + (var,)
        if kind == 3:
            z = scope.fresh()
            limit = num(rng.randint(0, bound))
            body = build(level - 1, inner, nesting + 1)
            guard = bounded_le(Var(var), limit, z)
            if rng.random() < 0.5:
                return Exists(var, And(guard, body))
            return Forall(var, Or(Not(guard), body))
        if kind == 4:
            z = scope.fresh()
            s = _small_term(rng, bound_vars, 1)
            t = _small_term(rng, bound_vars, 1)
            return Exists(z, Eq(Add(Var(z), s), t))
        body_vars = inner if unbounded else bound_vars
        ctor = Exists if rng.random() < 0.5 else Forall
        return ctor(var, build(level - 1, body_vars, nesting + 1))

    return build(depth, (), 0)


# -----------------------------------------------------------------------------
# Decidable sequences
# -----------------------------------------------------------------------------


def decidable_pool(rng: random.Random, size: int = 6, evaluator: Optional[Evaluator] = None) -> list[Formula]:
    """Non-Boolean sentences decided by evaluation; they serve as propositional atoms."""

    engine = evaluator or Evaluator()
    pool: list[Formula] = []
    while len(pool) < size:
        if rng.random() < 0.5:
            phi = Eq(_small_term(rng, ()), _small_term(rng, ()))
        else:
            scope_var = 0
            z = 1
            limit = num(rng.randint(0, 3))
            body = Eq(_small_term(rng, (scope_var,), 1), _small_term(rng, (scope_var,), 1))
            guard = bounded_le(Var(scope_var), limit, z)
            if rng.random() < 0.5:
                phi = Exists(scope_var, And(guard, body))
            else:
                phi = Forall(scope_var, Or(Not(guard), body))
        if phi in pool or engine(phi) is None:
            continue
        pool.append(phi)
    return pool


def boolean_combination(rng: random.Random, pool: Sequence[Formula]) -> Formula:
    kind = rng.randrange(4)
    first = rng.choice(list(pool))
    if kind == 0:
        return first
    if kind == 1:
        return Not(first)
    second = rng.choice(list(pool))
    return Or(first, second) if kind == 2 else And(first, Not(second))


def decidable_sequence(rng: random.Random, pool: Sequence[Formula], length: int) -> list[Formula]:
    return [boolean_combination(rng, pool) for _ in range(length)]


def yablo_ready(
    rng: random.Random,
    pool: Sequence[Formula],
    length: int,
    evaluator: Optional[Evaluator] = None,
) -> list[Formula]:
    """A sequence of true sentences, so phi_0 holds and every step is preserved."""

    engine = evaluator or Evaluator()
    found: list[Formula] = []
    for phi in decidable_sequence(rng, pool, length):
        found.append(phi if engine(phi) else Not(phi))
    return found


# -----------------------------------------------------------------------------
# Satisfaction-class scenarios
# -----------------------------------------------------------------------------


def _open_atom(rng: random.Random) -> Formula:
    kind = rng.randrange(5)
    k = rng.randint(0, 2)
    if kind == 0:
        return Eq(Var(0), num(k))
    if kind == 1:
        return Eq(Var(0), Var(1))
    if kind == 2:
        return Eq(Add(Var(0), Var(1)), num(k))
    if kind == 3:
        return Eq(Succ(Var(1)), Var(0))
    return Eq(num(k), num(rng.randint(0, 2)))


def short_formula(rng: random.Random, depth: int) -> Formula:
    """Formulas over x0, x1 whose disjunction spines have at most two disjuncts."""

    if depth <= 0 or rng.random() < 0.3:
        return _open_atom(rng)
    kind = rng.randrange(5)
    if kind == 0:
        return Not(short_formula(rng, depth - 1))
    if kind == 1:
        left = short_formula(rng, depth - 1)
        if isinstance(left, Or):
            left = Not(left)
        return Or(left, short_formula(rng, depth - 1))
    if kind == 2:
        return And(short_formula(rng, depth - 1), short_formula(rng, depth - 1))
    ctor = Exists if kind == 3 else Forall
    return ctor(rng.randrange(2), short_formula(rng, depth - 1))


def _long_disjunction(rng: random.Random, length: int) -> Formula:
    return bigvee([Eq(Var(0), num(rng.randint(0, 4))) for _ in range(length)])


def random_scenario(rng: random.Random, budget: EVBudget, policy: str = "satisfy") -> EVScenario:
    """A scenario within the environment and class limits of ``budget``.

    The long disjunction has more than ``long_cut`` disjuncts so it never
    straddles the cut; base formulas stay short.
    """

    low, high = budget.long_cut_range
    long_cut = rng.randint(low, high)
    for attempt in range(20):
        extra = 0 if attempt >= 10 else rng.randint(1, 3)
        length = long_cut + (1 if attempt >= 10 else rng.randint(1, 3))
        long_target = _long_disjunction(rng, length)
        targets: list[Formula] = [long_target]
        for _ in range(extra):
            if rng.random() < 0.25:
                targets.append(Exists(0, long_target) if rng.random() < 0.5 else Not(long_target))
            else:
                targets.append(short_formula(rng, rng.randint(1, 3)))
        targets = list(dict.fromkeys(targets))

        domain: frozenset[Formula] = frozenset()
        if rng.random() < 0.5:
            domain = subformula_closure([short_formula(rng, 2)])
        if any(isinstance(phi, Or) and spine_count(phi) >= long_cut for phi in domain):
            continue

        environment = subformula_closure([*targets, *domain])
        if len(environment) > budget.max_environment:
            continue
        if len(class_graph(environment).classes) > budget.max_classes:
            continue
        if domain:
            base = complete_presat(compositional_pairs(domain, budget.universe), domain, budget.universe)
        else:
            base = PartialSatClass(frozenset(), frozenset(), budget.universe)
        return EVScenario(environment, base, tuple(targets), long_cut, policy)  # type: ignore[arg-type]

    long_target = _long_disjunction(rng, long_cut + 1)
    base = PartialSatClass(frozenset(), frozenset(), budget.universe)
    return EVScenario(subformula_closure([long_target]), base, (long_target,), long_cut, policy)  # type: ignore[arg-type]


# -----------------------------------------------------------------------------
# Cut models
# -----------------------------------------------------------------------------


def _random_sequence(rng: random.Random, budget: CutModelBudget) -> list[int]:
    length = rng.randint(0, budget.max_length)
    size, cut = budget.size, budget.cut
    kind = rng.randrange(5)
    if kind == 0:
        return [rng.randrange(cut) for _ in range(length)]
    if kind == 1:
        return [rng.randrange(size) for _ in range(length)]
    if kind == 2:
        start = rng.randint(max(0, cut - length), size - length - 1) if length < size - cut else 0
        return list(range(start, start + length))
    if kind == 3:
        return [rng.randrange(cut, size) for _ in range(length)]
    values = [rng.randrange(size) for _ in range(rng.randint(1, 4))]
    return [rng.choice(values) for _ in range(length)]


def random_cut_model(rng: random.Random, budget: CutModelBudget, threshold: Optional[int] = None) -> CutModel:
    return CutModel(
        size=budget.size,
        cut=budget.cut,
        sequences=[_random_sequence(rng, budget) for _ in range(budget.sequences)],
        long_threshold=budget.suite_threshold if threshold is None else threshold,
    )


# -----------------------------------------------------------------------------
# Proofs
# -----------------------------------------------------------------------------


def random_proof(rng: random.Random, pool: Sequence[Formula], max_lines: int = 12, corrupt: float = 0.3) -> ProofFile:
    """A premise/modus-ponens derivation, occasionally with a broken citation."""

    lines: list[ProofLine] = []
    formulas: list[Formula] = []
    while len(lines) < max_lines:
        room = max_lines - len(lines)
        if formulas and room >= 2 and rng.random() < 0.5:
            minor = rng.randrange(len(formulas))
            target = boolean_combination(rng, pool)
            major = implies(formulas[minor], target)
            lines.append(ProofLine(formula=to_text(major)))
            formulas.append(major)
            lines.append(ProofLine(formula=to_text(target), rule="mp", cites=[minor, len(formulas) - 1]))
            formulas.append(target)
        else:
            phi = boolean_combination(rng, pool)
            lines.append(ProofLine(formula=to_text(phi)))
            formulas.append(phi)
        if rng.random() < 0.2:
            break
    if rng.random() < corrupt:
        mp_lines = [index for index, line in enumerate(lines) if line.rule == "mp"]
        if mp_lines:
            index = rng.choice(mp_lines)
            minor, major = lines[index].cites
            lines[index] = ProofLine(formula=lines[index].formula, rule="mp", cites=[major, minor])
        elif len(lines) >= 2:
            lines[-1] = ProofLine(formula=lines[-1].formula, rule="mp", cites=[0, 0])
    return ProofFile(lines=lines)
