"""Brute-force reference implementations used to cross-check the kernel.

Nothing here calls into ``semantics`` or the proof checker: terms are
computed by their own recursion, quantifier ranges are recognized by
their own pattern checks, and modus ponens is closed pairwise.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from typing import Optional

from ..models import ProofFile
from .errors import LabError
from .syntax import Add, And, Eq, Exists, Forall, Formula, Mul, Not, Or, Succ, Term, Var, Zero, parse


def term_value(term: Term, env: Mapping[int, int]) -> int:
    if isinstance(term, Zero):
        return 0
    if isinstance(term, Var):
        return env[term.index]
    if isinstance(term, Succ):
        return term_value(term.arg, env) + 1
    if isinstance(term, Add):
        return term_value(term.left, env) + term_value(term.right, env)
    if isinstance(term, Mul):
        return term_value(term.left, env) * term_value(term.right, env)
    raise TypeError(f"not a term: {term!r}")


def _comparison_bounds(phi: Exists, env: Mapping[int, int]) -> Optional[tuple[int, int]]:
    """(value of s, value of t) for ``E z.(z+s)=t`` with z not free in s, t."""

    body = phi.body
    if not isinstance(body, Eq) or not isinstance(body.left, Add):
        return None
    head, s, t = body.left.left, body.left.right, body.right
    if head != Var(phi.var) or phi.var in s.free or phi.var in t.free:
        return None
    return term_value(s, env), term_value(t, env)


def _guard_range(phi: Exists | Forall, env: Mapping[int, int]) -> Optional[tuple[int, Formula]]:
    """Upper bound and body of a guarded quantifier, if ``phi`` is one."""

    body = phi.body
    if isinstance(phi, Exists) and isinstance(body, And):
        guard, rest = body.left, body.right
    elif isinstance(phi, Forall) and isinstance(body, Or) and isinstance(body.left, Not):
        guard, rest = body.left.body, body.right
    else:
        return None
    if not isinstance(guard, Exists):
        return None
    inner = guard.body
    if not isinstance(inner, Eq) or not isinstance(inner.left, Add):
        return None
    if inner.left.left != Var(guard.var) or inner.left.right != Var(phi.var):
        return None
    if guard.var == phi.var or guard.var in inner.right.free or phi.var in inner.right.free:
        return None
    return term_value(inner.right, env), rest


def brute_force(phi: Formula, bound: int = 8, env: Optional[Mapping[int, int]] = None) -> Optional[bool]:
    """Three-valued truth with quantifiers searched over ``0..bound``."""

    env = dict(env or {})
    if isinstance(phi, Eq):
        return term_value(phi.left, env) == term_value(phi.right, env)
    if isinstance(phi, Not):
        inner = brute_force(phi.body, bound, env)
        return None if inner is None else not inner
    if isinstance(phi, (Or, And)):
        values = [brute_force(phi.left, bound, env), brute_force(phi.right, bound, env)]
        absorbing = isinstance(phi, Or)
        if absorbing in values:
            return absorbing
        if None in values:
            return None
        return not absorbing
    if not isinstance(phi, (Exists, Forall)):
        raise TypeError(f"not a formula: {phi!r}")

    if isinstance(phi, Exists):
        bounds = _comparison_bounds(phi, env)
        if bounds is not None:
            return bounds[0] <= bounds[1]
    if phi.var not in phi.body.free:
        return brute_force(phi.body, bound, env)

    decisive = isinstance(phi, Exists)
    guarded = _guard_range(phi, env)
    if guarded is not None and guarded[0] <= bound:
        limit, rest = guarded
        outcomes = [brute_force(rest, bound, {**env, phi.var: x}) for x in range(limit + 1)]
        if decisive in outcomes:
            return decisive
        return None if None in outcomes else not decisive

    for x in range(bound + 1):
        if brute_force(phi.body, bound, {**env, phi.var: x}) is decisive:
            return decisive
    return None


# -----------------------------------------------------------------------------
# Modus ponens closure
# -----------------------------------------------------------------------------


def _consequences(formulas: Sequence[Formula]) -> dict[Formula, set[tuple[int, int]]]:
    """Every b with a and !a|b among ``formulas``, with the index pairs producing it."""

    found: dict[Formula, set[tuple[int, int]]] = {}
    for i, minor in enumerate(formulas):
        for j, major in enumerate(formulas):
            if isinstance(major, Or) and major.left == Not(minor):
                found.setdefault(major.right, set()).add((i, j))
    return found


def mp_accepts(proof: ProofFile) -> bool:
    """Whether every modus ponens line is among the pairwise consequences of earlier lines."""

    try:
        formulas = [parse(line.formula) for line in proof.lines]
    except LabError:
        return False
    for index, (phi, line) in enumerate(zip(formulas, proof.lines)):
        if phi.free:
            return False
        if line.rule == "premise":
            if line.cites:
                return False
            continue
        if len(line.cites) != 2:
            return False
        pairs = _consequences(formulas[:index]).get(phi, set())
        if tuple(line.cites) not in pairs:
            return False
    return True
