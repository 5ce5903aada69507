"""Hypothesis strategies for terms, formulas, sentences and assignments."""

from __future__ import annotations

import hypothesis.strategies as st

from src.kernel.generators import estimated_code_bits
from src.kernel.syntax import Add, And, Eq, Exists, Forall, Formula, Mul, Node, Not, Or, Succ, Term, Var, Zero

VARIABLES = st.integers(min_value=0, max_value=3)


def terms(max_leaves: int = 6) -> st.SearchStrategy[Term]:
    return st.recursive(
        st.one_of(st.just(Zero()), VARIABLES.map(Var)),
        lambda children: st.one_of(
            children.map(Succ),
            st.builds(Add, children, children),
            st.builds(Mul, children, children),
        ),
        max_leaves=max_leaves,
    )


def closed_terms(max_leaves: int = 5) -> st.SearchStrategy[Term]:
    return st.recursive(
        st.just(Zero()),
        lambda children: st.one_of(
            children.map(Succ),
            st.builds(Add, children, children),
            st.builds(Mul, children, children),
        ),
        max_leaves=max_leaves,
    )


def formulas(max_leaves: int = 5, term_leaves: int = 4) -> st.SearchStrategy[Formula]:
    return st.recursive(
        st.builds(Eq, terms(term_leaves), terms(term_leaves)),
        lambda children: st.one_of(
            children.map(Not),
            st.builds(Or, children, children),
            st.builds(And, children, children),
            st.builds(Exists, VARIABLES, children),
            st.builds(Forall, VARIABLES, children),
        ),
        max_leaves=max_leaves,
    )


def close(phi: Formula) -> Formula:
    """Universal closure over the free variables."""

    for index in sorted(phi.free):
        phi = Forall(index, phi)
    return phi


def sentences(max_leaves: int = 5, term_leaves: int = 4) -> st.SearchStrategy[Formula]:
    return formulas(max_leaves, term_leaves).map(close)


def small_trees(max_bits: int = 1 << 14) -> st.SearchStrategy[Node]:
    """Terms and formulas whose codes stay cheap to compute."""

    return st.one_of(terms(4), formulas(3, 3)).filter(lambda node: estimated_code_bits(node) <= max_bits)


def assignments_for(node: Node, high: int = 5) -> st.SearchStrategy[dict[int, int]]:
    return st.fixed_dictionaries({index: st.integers(min_value=0, max_value=high) for index in sorted(node.free)})
