"""Syntactic templates, similarity and extensional equivalence.

The template of a formula replaces every maximal subterm without bound
variables by a slot variable. Slots are numbered ``x0, x1, ...`` left to
right and bound variables are renamed ``x<n>, x<n+1>, ...`` in binder
order, where ``n`` is the number of slots. Two formulas are similar when
their templates coincide.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .semantics import val_seq
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
    all_variables,
    alpha_equal,
    instantiate,
)


@dataclass(frozen=True)
class SyntacticTemplate:
    template: Formula
    slots: tuple[Term, ...]

    @property
    def arity(self) -> int:
        return len(self.slots)

    def reconstruct(self) -> Formula:
        """Fill the slots back in; the result is alpha-equal to the source."""

        return fill(self.template, self.slots)


class Witness(NamedTuple):
    template: Formula
    left: tuple[Term, ...]
    right: tuple[Term, ...]


def _collect_slots(phi: Formula, bound: frozenset[int], out: list[Term]) -> None:
    match phi:
        case Eq(left, right):
            _term_slots(left, bound, out)
            _term_slots(right, bound, out)
        case Not(body):
            _collect_slots(body, bound, out)
        case Or(left, right) | And(left, right):
            _collect_slots(left, bound, out)
            _collect_slots(right, bound, out)
        case Exists(var, body) | Forall(var, body):
            _collect_slots(body, bound | {var}, out)


def _term_slots(term: Term, bound: frozenset[int], out: list[Term]) -> None:
    if not (term.free & bound):
        out.append(term)
        return
    for arg in term.args:
        if isinstance(arg, Term):
            _term_slots(arg, bound, out)


class _Renamer:
    def __init__(self, first_bound: int):
        self.next_bound = first_bound
        self.next_slot = 0

    def formula(self, phi: Formula, scope: Mapping[int, int]) -> Formula:
        match phi:
            case Eq(left, right):
                return Eq(self.term(left, scope), self.term(right, scope))
            case Not(body):
                return Not(self.formula(body, scope))
            case Or(left, right):
                return Or(self.formula(left, scope), self.formula(right, scope))
            case And(left, right):
                return And(self.formula(left, scope), self.formula(right, scope))
            case Exists(var, body) | Forall(var, body):
                renamed = self.next_bound
                self.next_bound += 1
                return type(phi)(renamed, self.formula(body, {**scope, var: renamed}))
        raise TypeError(f"not a formula: {phi!r}")

    def term(self, term: Term, scope: Mapping[int, int]) -> Term:
        if term.free.isdisjoint(scope):
            slot = Var(self.next_slot)
            self.next_slot += 1
            return slot
        match term:
            case Var(index):
                return Var(scope[index])
            case Succ(arg):
                return Succ(self.term(arg, scope))
            case Add(left, right):
                return Add(self.term(left, scope), self.term(right, scope))
            case Mul(left, right):
                return Mul(self.term(left, scope), self.term(right, scope))
        raise TypeError(f"not a term: {term!r}")


def template(phi: Formula) -> SyntacticTemplate:
    slots: list[Term] = []
    _collect_slots(phi, frozenset(), slots)
    shape = _Renamer(len(slots)).formula(phi, {})
    return SyntacticTemplate(shape, tuple(slots))


def fill(shape: Formula, slots: tuple[Term, ...]) -> Formula:
    """Replace slot variable ``x<i>`` by ``slots[i]`` without capture."""

    offset = max(all_variables(shape, *slots), default=-1) + 1
    counter = [offset]

    def formula(node: Formula, scope: Mapping[int, int]) -> Formula:
        match node:
            case Eq(left, right):
                return Eq(term(left, scope), term(right, scope))
            case Not(body):
                return Not(formula(body, scope))
            case Or(left, right):
                return Or(formula(left, scope), formula(right, scope))
            case And(left, right):
                return And(formula(left, scope), formula(right, scope))
            case Exists(var, body) | Forall(var, body):
                fresh = counter[0]
                counter[0] += 1
                return type(node)(fresh, formula(body, {**scope, var: fresh}))
        raise TypeError(f"not a formula: {node!r}")

    def term(node: Term, scope: Mapping[int, int]) -> Term:
        match node:
            case Var(index):
                if index in scope:
                    return Var(scope[index])
                return slots[index] if index < len(slots) else node
            case Zero():
                return node
            case Succ(arg):
                return Succ(term(arg, scope))
            case Add(left, right):
                return Add(term(left, scope), term(right, scope))
            case Mul(left, right):
                return Mul(term(left, scope), term(right, scope))
        raise TypeError(f"not a term: {node!r}")

    return formula(shape, {})


def template_defects(tpl: SyntacticTemplate, source: Formula) -> list[str]:
    """Names of the template conditions that ``tpl`` fails for ``source``."""

    defects: list[str] = []
    if not alpha_equal(tpl.reconstruct(), source):
        defects.append("reconstruction")
    bound = _bound_variables(tpl.template)
    if bound & tpl.template.free:
        defects.append("free-and-bound")
    occurrences = _free_occurrences(tpl.template)
    if any(count != 1 for count in occurrences.values()):
        defects.append("single-occurrence")
    terms = _subterms(tpl.template)
    if any(not term.free for term in terms):
        defects.append("closed-term")
    if any(not (term.free & bound) and not isinstance(term, Var) for term in terms):
        defects.append("free-only-term")
    return defects


def _bound_variables(phi: Formula) -> set[int]:
    found: set[int] = set()
    stack = [phi]
    while stack:
        node = stack.pop()
        if isinstance(node, (Exists, Forall)):
            found.add(node.var)
        stack.extend(arg for arg in node.args if isinstance(arg, Formula))
    return found


def _free_occurrences(phi: Formula) -> dict[int, int]:
    counts: dict[int, int] = {}

    def walk_term(term: Term, bound: frozenset[int]) -> None:
        if isinstance(term, Var):
            if term.index not in bound:
                counts[term.index] = counts.get(term.index, 0) + 1
            return
        for arg in term.args:
            walk_term(arg, bound)

    def walk(node: Formula, bound: frozenset[int]) -> None:
        match node:
            case Eq(left, right):
                walk_term(left, bound)
                walk_term(right, bound)
            case Exists(var, body) | Forall(var, body):
                walk(body, bound | {var})
            case _:
                for arg in node.args:
                    walk(arg, bound)

    walk(phi, frozenset())
    return counts


def _subterms(phi: Formula) -> list[Term]:
    """Every term occurrence in ``phi``, subterms included."""

    found: list[Term] = []
    stack: list = [phi]
    while stack:
        node = stack.pop()
        if isinstance(node, Term):
            found.append(node)
        stack.extend(arg for arg in node.args if not isinstance(arg, int))
    return found


def similar(first: Formula, second: Formula) -> bool:
    return template(first).template == template(second).template


def regularity_key(phi: Formula, alpha: Mapping[int, int] | None = None) -> tuple[Formula, tuple[int, ...]]:
    """Template of ``phi[alpha]`` together with its slot values."""

    sentence = instantiate(phi, alpha or {})
    tpl = template(sentence)
    return tpl.template, tuple(val_seq(tpl.slots))


def ext_equiv(
    p: tuple[Formula, Mapping[int, int]],
    q: tuple[Formula, Mapping[int, int]],
) -> Optional[Witness]:
    """Witness of ``p ≃ q``: a shared template and slot terms of equal values."""

    left = template(instantiate(p[0], p[1]))
    right = template(instantiate(q[0], q[1]))
    if left.template != right.template:
        return None
    if val_seq(left.slots) != val_seq(right.slots):
        return None
    return Witness(left.template, left.slots, right.slots)
