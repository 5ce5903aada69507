"""Disjunction and conjunction builders over sentence sequences."""

from __future__ import annotations

from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from enum import Enum
from functools import reduce

from .coding import encode, num
from .errors import EmptySequenceError, InvalidChoiceError, TooShortError
from .semantics import bounded_le
from .syntax import And, Eq, Exists, Formula, Not, Or, Var, Zero, fresh_variable

ChoiceFunction = Callable[[frozenset[Formula]], Formula]

FALSUM = Not(Eq(Zero(), Zero()))


class BuilderKind(str, Enum):
    LEFT = "left"
    BALANCED = "balanced"
    OUTER = "outer"
    NEGCONJ = "negconj"
    SELECTIVE = "selective"


def bigvee(phis: Sequence[Formula]) -> Formula:
    """Left-grouped disjunction ``((p0 | p1) | ...) | pc``."""

    if not phis:
        raise EmptySequenceError("a left-grouped disjunction needs at least one disjunct")
    return reduce(Or, phis[1:], phis[0])


def bigwedge(phis: Sequence[Formula]) -> Formula:
    if not phis:
        raise EmptySequenceError("a left-grouped conjunction needs at least one conjunct")
    return reduce(And, phis[1:], phis[0])


def balanced(phis: Sequence[Formula]) -> Formula:
    """Balanced disjunction; the empty one is ``!(0=0)``."""

    if not phis:
        return FALSUM
    if len(phis) == 1:
        return phis[0]
    half = len(phis) // 2
    return Or(balanced(phis[:half]), balanced(phis[half:]))


def balanced_split(phis: Sequence[Formula]) -> tuple[tuple[Formula, ...], tuple[Formula, ...]]:
    if len(phis) < 2:
        raise TooShortError(f"a balanced split needs two disjuncts, got {len(phis)}")
    half = len(phis) // 2
    return tuple(phis[:half]), tuple(phis[half:])


def quantified_outer(phis: Sequence[Formula]) -> Formula:
    """``E x.(x <= c & (((c_0=x) & p0) | ... | ((c_c=x) & pc)))`` for fresh x."""

    if not phis:
        raise EmptySequenceError("the quantified outer disjunction needs at least one disjunct")
    x = fresh_variable(*phis)
    z = x + 1
    c = len(phis) - 1
    tagged = [And(Eq(num(i), Var(x)), phi) for i, phi in enumerate(phis)]
    return Exists(x, And(bounded_le(Var(x), num(c), z), bigvee(tagged)))


def negated_conjunction_outer(phis: Sequence[Formula]) -> Formula:
    """``!((!p0 & !p1) & ... & !pc)``."""

    if not phis:
        raise EmptySequenceError("the negated-conjunction outer disjunction needs at least one disjunct")
    return Not(bigwedge([Not(phi) for phi in phis]))


def min_code_choice(options: frozenset[Formula]) -> Formula:
    return min(options, key=encode)


def selective_outer(options: Iterable[Formula], choice: ChoiceFunction = min_code_choice) -> Formula:
    """``D(S) = choice(S) | D(S - {choice(S)})`` with ``D({}) = !(0=0)``."""

    remaining = frozenset(options)
    picks: list[Formula] = []
    while remaining:
        picked = choice(remaining)
        if picked not in remaining:
            raise InvalidChoiceError(f"choice returned a sentence outside its argument: {picked!r}")
        picks.append(picked)
        remaining = remaining - {picked}
    result = FALSUM
    for picked in reversed(picks):
        result = Or(picked, result)
    return result


def spine(phi: Formula) -> list[Formula]:
    """Disjuncts along the maximal left-grouped spine of ``phi``."""

    tail: list[Formula] = []
    while isinstance(phi, Or):
        tail.append(phi.right)
        phi = phi.left
    tail.append(phi)
    tail.reverse()
    return tail


def spine_count(phi: Formula) -> int:
    count = 1
    while isinstance(phi, Or):
        count += 1
        phi = phi.left
    return count


def balanced_count(phi: Formula) -> int:
    """Leaves of ``phi`` read as a balanced disjunction, 0 if it is not one."""

    def leaves(node: Formula) -> int:
        if not isinstance(node, Or):
            return 1
        left, right = leaves(node.left), leaves(node.right)
        if not left or not right or left != (left + right) // 2:
            return 0
        return left + right

    if not isinstance(phi, Or):
        return 0
    return leaves(phi)


@dataclass(frozen=True)
class DisjunctionBuilder:
    """A named, deterministic way of turning a sentence sequence into one sentence."""

    kind: BuilderKind
    apply: Callable[[Sequence[Formula]], Formula]
    choice_id: str | None = None

    def __call__(self, phis: Sequence[Formula]) -> Formula:
        return self.apply(phis)

    @property
    def name(self) -> str:
        if self.choice_id:
            return f"{self.kind.value}:{self.choice_id}"
        return self.kind.value


_CHOICES: dict[str, ChoiceFunction] = {"min-code": min_code_choice}


def builder(kind: BuilderKind | str, choice: str = "min-code") -> DisjunctionBuilder:
    kind = BuilderKind(kind)
    if kind is BuilderKind.LEFT:
        return DisjunctionBuilder(kind, bigvee)
    if kind is BuilderKind.BALANCED:
        return DisjunctionBuilder(kind, balanced)
    if kind is BuilderKind.OUTER:
        return DisjunctionBuilder(kind, quantified_outer)
    if kind is BuilderKind.NEGCONJ:
        return DisjunctionBuilder(kind, negated_conjunction_outer)
    try:
        choose = _CHOICES[choice]
    except KeyError as exc:
        raise InvalidChoiceError(f"unknown choice function {choice!r}") from exc
    return DisjunctionBuilder(kind, lambda phis: selective_outer(phis, choose), choice_id=choice)


STANDARD_KINDS = (BuilderKind.LEFT, BuilderKind.BALANCED, BuilderKind.OUTER, BuilderKind.NEGCONJ)
