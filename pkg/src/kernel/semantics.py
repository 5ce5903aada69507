"""Evaluation over the standard model with a search budget.

Quantifiers search their witnesses in ``0..budget``. A search that finds
nothing is inconclusive unless the quantifier is bounded by a guard
``E z.(z+x)=t`` with a determinable ``t``, in which case the range is searched
exhaustively. Connectives follow Kleene's strong three-valued tables.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Mapping
from enum import Enum
from typing import Optional

from ..models import CertificateStep, Verdict
from .errors import OpenTermError, UnboundVariableError
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
    preview,
    require_sentence,
)

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 64


class Truth(str, Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    @classmethod
    def of(cls, flag: Optional[bool]) -> "Truth":
        if flag is None:
            return cls.UNKNOWN
        return cls.TRUE if flag else cls.FALSE

    def __invert__(self) -> "Truth":
        if self is Truth.TRUE:
            return Truth.FALSE
        if self is Truth.FALSE:
            return Truth.TRUE
        return Truth.UNKNOWN

    def __and__(self, other: "Truth") -> "Truth":
        if Truth.FALSE in (self, other):
            return Truth.FALSE
        if Truth.UNKNOWN in (self, other):
            return Truth.UNKNOWN
        return Truth.TRUE

    def __or__(self, other: "Truth") -> "Truth":
        if Truth.TRUE in (self, other):
            return Truth.TRUE
        if Truth.UNKNOWN in (self, other):
            return Truth.UNKNOWN
        return Truth.FALSE

    def as_bool(self) -> Optional[bool]:
        if self is Truth.UNKNOWN:
            return None
        return self is Truth.TRUE


# (role, variable, value)
Step = tuple[str, int, int]
Outcome = tuple[Truth, tuple[Step, ...]]
TruthOracle = Callable[[Formula], Optional[bool]]


# -----------------------------------------------------------------------------
# Terms
# -----------------------------------------------------------------------------


def _term_value(term: Term, env: Mapping[int, int]) -> int:
    values: dict[Term, int] = {}
    stack: list[tuple[Term, bool]] = [(term, False)]
    while stack:
        node, ready = stack.pop()
        if node in values:
            continue
        match node:
            case Zero():
                values[node] = 0
            case Var(index):
                values[node] = env[index]
            case Succ(arg):
                if ready:
                    values[node] = values[arg] + 1
                else:
                    stack.append((node, True))
                    stack.append((arg, False))
            case Add(left, right) | Mul(left, right):
                if ready:
                    a, b = values[left], values[right]
                    values[node] = a + b if isinstance(node, Add) else a * b
                else:
                    stack.append((node, True))
                    stack.append((right, False))
                    stack.append((left, False))
            case _:
                raise TypeError(f"not a term: {node!r}")
    return values[term]


def val(term: Term) -> int:
    """Value of a closed term."""

    if term.free:
        raise OpenTermError(f"{preview(term)} is not closed")
    return _term_value(term, {})


def term_eval(term: Term, alpha: Mapping[int, int]) -> int:
    """Value of ``term`` with its variables read from ``alpha``."""

    missing = term.free - set(alpha.keys())
    if missing:
        raise UnboundVariableError(missing)
    return _term_value(term, alpha)


def val_seq(terms: Iterable[Term]) -> list[int]:
    return [val(term) for term in terms]


# -----------------------------------------------------------------------------
# Bounded shapes
# -----------------------------------------------------------------------------


def bounded_le(x: Term, t: Term, z: int) -> Formula:
    """``x <= t`` spelled as ``E z.(z+x)=t``."""

    return Exists(z, Eq(Add(Var(z), x), t))


def match_comparison(phi: Formula) -> Optional[tuple[int, Term, Term]]:
    """Recognize ``E z.(z+s)=t`` with ``z`` absent from ``s`` and ``t``."""

    match phi:
        case Exists(z, Eq(Add(Var(w), s), t)) if w == z and z not in s.free and z not in t.free:
            return z, s, t
    return None


def match_bounded(phi: Formula) -> Optional[tuple[str, int, Term, Formula]]:
    """Recognize guarded quantifiers.

    ``E v.((E z.(z+v)=t) & psi)`` gives ``("exists", v, t, psi)`` and
    ``A v.(!(E z.(z+v)=t) | psi)`` gives ``("forall", v, t, psi)``.
    """

    match phi:
        case Exists(v, And(guard, body)):
            kind = "exists"
        case Forall(v, Or(Not(guard), body)):
            kind = "forall"
        case _:
            return None
    shape = match_comparison(guard)
    if shape is None:
        return None
    _, s, t = shape
    if s != Var(v) or v in t.free:
        return None
    return kind, v, t, body


# -----------------------------------------------------------------------------
# Evaluator
# -----------------------------------------------------------------------------


class Evaluator:
    """Budgeted evaluator with a memo shared across calls.

    The memo is keyed on (formula, values of its free variables), so
    hash-consed inputs evaluate in time linear in their DAG size.
    """

    def __init__(self, budget: int = DEFAULT_BUDGET):
        if budget < 0:
            raise ValueError("budget must be a natural number")
        self.budget = budget
        self._memo: dict[tuple, Outcome] = {}

    def outcome(self, phi: Formula, env: Mapping[int, int] | None = None) -> Outcome:
        env = env or {}
        key = (phi, tuple((index, env[index]) for index in sorted(phi.free)))
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        result = self._compute(phi, env)
        self._memo[key] = result
        return result

    def truth(self, phi: Formula, env: Mapping[int, int] | None = None) -> Truth:
        return self.outcome(phi, env)[0]

    def __call__(self, phi: Formula) -> Optional[bool]:
        return self.truth(phi).as_bool()

    def _compute(self, phi: Formula, env: Mapping[int, int]) -> Outcome:
        match phi:
            case Eq(left, right):
                return Truth.of(_term_value(left, env) == _term_value(right, env)), ()
            case Not(body):
                value, certificate = self.outcome(body, env)
                return ~value, certificate
            case Or(left, right):
                return self._binary(left, right, env, Truth.TRUE)
            case And(left, right):
                return self._binary(left, right, env, Truth.FALSE)
            case Exists() | Forall():
                return self._quantifier(phi, env)
        raise TypeError(f"not a formula: {phi!r}")

    def _binary(self, left: Formula, right: Formula, env: Mapping[int, int], absorbing: Truth) -> Outcome:
        first, first_cert = self.outcome(left, env)
        if first is absorbing:
            return first, first_cert
        second, second_cert = self.outcome(right, env)
        if second is absorbing:
            return second, second_cert
        if first is Truth.UNKNOWN or second is Truth.UNKNOWN:
            return Truth.UNKNOWN, ()
        return first, first_cert + second_cert

    def _quantifier(self, phi: Exists | Forall, env: Mapping[int, int]) -> Outcome:
        comparison = match_comparison(phi)
        if comparison is not None:
            z, s, t = comparison
            low, high = _term_value(s, env), _term_value(t, env)
            if low <= high:
                return Truth.TRUE, (("witness", z, high - low),)
            return Truth.FALSE, (("exhausted", z, high),)

        var, body = phi.var, phi.body
        if var not in body.free:
            return self.outcome(body, env)

        existential = isinstance(phi, Exists)
        decisive = Truth.TRUE if existential else Truth.FALSE
        role = "witness" if existential else "counterexample"

        bounded = match_bounded(phi)
        if bounded is not None:
            _, _, bound_term, guarded = bounded
            bound = _term_value(bound_term, env)
            if bound <= self.budget:
                undetermined = False
                for value in range(bound + 1):
                    result, certificate = self.outcome(guarded, {**env, var: value})
                    if result is decisive:
                        return decisive, ((role, var, value),) + certificate
                    if result is Truth.UNKNOWN:
                        undetermined = True
                if undetermined:
                    return Truth.UNKNOWN, ()
                return ~decisive, (("exhausted", var, bound),)

        for value in range(self.budget + 1):
            result, certificate = self.outcome(body, {**env, var: value})
            if result is decisive:
                return decisive, ((role, var, value),) + certificate
        return Truth.UNKNOWN, ()


def evaluate(phi: Formula, budget: int = DEFAULT_BUDGET, evaluator: Evaluator | None = None) -> Verdict:
    """Three-valued verdict for a sentence, with its certificate."""

    require_sentence(phi)
    engine = evaluator if evaluator is not None and evaluator.budget == budget else Evaluator(budget)
    truth, certificate = engine.outcome(phi)
    return Verdict(
        verdict=truth.value,
        certificate=[CertificateStep(role=role, var=var, value=value) for role, var, value in certificate],
        sentence=preview(phi),
        budget=budget,
    )


def evaluation_oracle(budget: int = DEFAULT_BUDGET) -> Evaluator:
    """Truth oracle backed by evaluation: returns True, False or None."""

    return Evaluator(budget)
