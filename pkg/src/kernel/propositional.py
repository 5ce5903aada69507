"""Propositional abstraction of sentences and truth-table decisions.

Maximal non-Boolean subformulas (equations and quantified formulas) become
atoms, identified structurally. The whole truth table is computed at once:
each atom is a bitmask over all ``2**n`` rows, so a connective costs one
big-integer operation.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from typing import Optional

from .errors import TooManyAtomsError
from .syntax import And, Formula, Not, Or

DEFAULT_ATOM_LIMIT = 20


def atoms(*phis: Formula) -> list[Formula]:
    """Distinct propositional atoms in order of first occurrence."""

    found: dict[Formula, None] = {}
    seen: set[Formula] = set()
    stack = list(reversed(phis))
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        if isinstance(node, (Not, Or, And)):
            stack.extend(reversed([arg for arg in node.args]))
        else:
            found.setdefault(node, None)
    return list(found)


def _atom_mask(position: int, rows: int) -> int:
    width = 1 << position
    block = ((1 << width) - 1) << width
    period = width << 1
    repeat = ((1 << rows) - 1) // ((1 << period) - 1)
    return block * repeat


def truth_table(phis: Iterable[Formula], variables: list[Formula]) -> list[int]:
    """Row bitmasks of each formula over the atoms in ``variables``."""

    rows = 1 << len(variables)
    full = (1 << rows) - 1
    masks: dict[Formula, int] = {atom: _atom_mask(i, rows) for i, atom in enumerate(variables)}

    def mask(phi: Formula) -> int:
        stack: list[tuple[Formula, bool]] = [(phi, False)]
        while stack:
            node, ready = stack.pop()
            if node in masks:
                continue
            if not ready:
                stack.append((node, True))
                stack.extend((arg, False) for arg in node.args if arg not in masks)
                continue
            match node:
                case Not(body):
                    masks[node] = full & ~masks[body]
                case Or(left, right):
                    masks[node] = masks[left] | masks[right]
                case And(left, right):
                    masks[node] = masks[left] & masks[right]
                case _:
                    raise KeyError(f"unregistered atom {node!r}")
        return masks[phi]

    return [mask(phi) for phi in phis]


def countervaluation(phi: Formula, atom_limit: int = DEFAULT_ATOM_LIMIT) -> Optional[dict[Formula, bool]]:
    """A row falsifying ``phi``, or ``None`` when it is a tautology."""

    variables = atoms(phi)
    if len(variables) > atom_limit:
        raise TooManyAtomsError(len(variables), atom_limit)
    rows = 1 << len(variables)
    full = (1 << rows) - 1
    (table,) = truth_table([phi], variables)
    falsified = full & ~table
    if not falsified:
        return None
    row = (falsified & -falsified).bit_length() - 1
    return {atom: bool((row >> i) & 1) for i, atom in enumerate(variables)}


def is_tautology(phi: Formula, atom_limit: int = DEFAULT_ATOM_LIMIT) -> bool:
    return countervaluation(phi, atom_limit) is None


def equivalent(first: Formula, second: Formula, atom_limit: int = DEFAULT_ATOM_LIMIT) -> bool:
    """Propositional equivalence under a shared atomization."""

    variables = atoms(first, second)
    if len(variables) > atom_limit:
        raise TooManyAtomsError(len(variables), atom_limit)
    left, right = truth_table([first, second], variables)
    return left == right


def evaluate_row(phi: Formula, row: Mapping[Formula, bool]) -> bool:
    """Truth of ``phi`` when its atoms take the values in ``row``."""

    match phi:
        case Not(body):
            return not evaluate_row(body, row)
        case Or(left, right):
            return evaluate_row(left, row) or evaluate_row(right, row)
        case And(left, right):
            return evaluate_row(left, row) and evaluate_row(right, row)
    return row[phi]
