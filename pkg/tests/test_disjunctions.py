from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.kernel.coding import encode, num
from src.kernel.disjunctions import (
    FALSUM,
    STANDARD_KINDS,
    balanced,
    balanced_count,
    balanced_split,
    bigvee,
    bigwedge,
    builder,
    negated_conjunction_outer,
    quantified_outer,
    selective_outer,
    spine,
    spine_count,
)
from src.kernel.errors import EmptySequenceError, InvalidChoiceError, TooShortError
from src.kernel.generators import decidable_pool, decidable_sequence
from src.kernel.semantics import Evaluator, bounded_le
from src.kernel.syntax import And, Eq, Exists, Not, Or, Var, dag_size, parse

ATOMS = [parse(text) for text in ["0=0", "0=S(0)", "S(0)=S(0)", "S(0)=0", "(0+0)=0", "(S(0)*0)=S(0)"]]
a, b, c = ATOMS[:3]


def test_left_grouped_disjunction():
    assert bigvee([a]) is a
    assert bigvee([a, b, c]) == Or(Or(a, b), c)
    assert bigwedge([a, b, c]) == And(And(a, b), c)
    assert spine(bigvee(ATOMS)) == ATOMS
    assert spine_count(bigvee(ATOMS)) == 6


def test_empty_sequences_are_rejected():
    for build in (bigvee, bigwedge, quantified_outer, negated_conjunction_outer):
        with pytest.raises(EmptySequenceError):
            build([])


def test_balanced_disjunction_splits_at_the_middle():
    assert balanced([]) is FALSUM
    assert balanced([a]) is a
    assert balanced([a, b, c]) == Or(a, Or(b, c))
    assert balanced_split([a, b, c]) == ((a,), (b, c))
    with pytest.raises(TooShortError):
        balanced_split([a])


def test_balanced_count_recognizes_balanced_shapes():
    assert balanced_count(balanced(ATOMS)) == 6
    assert balanced_count(balanced(ATOMS[:3])) == 3
    assert balanced_count(bigvee(ATOMS[:2])) == 2
    assert balanced_count(bigvee(ATOMS[:3])) == 0
    assert balanced_count(a) == 0


def test_quantified_outer_tags_each_disjunct():
    x0 = Var(0)
    expected = Exists(
        0,
        And(
            bounded_le(x0, num(1), 1),
            Or(And(Eq(num(0), x0), a), And(Eq(num(1), x0), b)),
        ),
    )
    assert quantified_outer([a, b]) == expected


def test_quantified_outer_picks_a_fresh_variable():
    phi = parse("E x3.(x3=0)")
    outer = quantified_outer([phi])
    assert outer.var == 4


def test_negated_conjunction_outer():
    assert negated_conjunction_outer([a]) == Not(Not(a))
    assert negated_conjunction_outer([a, b]) == Not(And(Not(a), Not(b)))


def test_selective_outer_orders_by_code_and_ends_in_falsum():
    phi = selective_outer([c, a, b])
    ordered = sorted([a, b, c], key=encode)
    assert phi == Or(ordered[0], Or(ordered[1], Or(ordered[2], FALSUM)))
    assert selective_outer([]) is FALSUM
    assert selective_outer([a, a]) == Or(a, FALSUM)


def test_selective_outer_rejects_a_bad_choice():
    with pytest.raises(InvalidChoiceError):
        selective_outer([a, b], choice=lambda options: c)


def test_builders_are_named():
    assert builder("left").name == "left"
    assert builder("selective").name == "selective:min-code"
    with pytest.raises(InvalidChoiceError):
        builder("selective", choice="nope")
    with pytest.raises(ValueError):
        builder("sideways")


def test_shared_disjuncts_stay_shared():
    long = bigvee([a] * 1000)
    assert dag_size(long) < 1010


@pytest.mark.parametrize("kind", [*STANDARD_KINDS, "selective"])
@given(seed=st.integers(min_value=0, max_value=10**6), length=st.integers(min_value=1, max_value=6))
def test_every_builder_is_true_exactly_when_a_disjunct_is(kind, seed, length):
    rng = random.Random(seed)
    engine = Evaluator(16)
    phis = decidable_sequence(rng, decidable_pool(rng, 4, engine), length)
    whole = builder(kind)(phis)
    assert engine(whole) == any(engine(phi) for phi in phis)
