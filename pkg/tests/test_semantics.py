from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.kernel.coding import num
from src.kernel.errors import NotASentenceError, OpenTermError, UnboundVariableError
from src.kernel.oracles import brute_force
from src.kernel.semantics import (
    Evaluator,
    Truth,
    bounded_le,
    evaluate,
    match_bounded,
    match_comparison,
    term_eval,
    val,
)
from src.kernel.syntax import Add, And, Eq, Exists, Forall, Mul, Not, Or, Succ, Var, Zero, instantiate, parse, parse_term, substitute

from .strategies import assignments_for, closed_terms, formulas, sentences


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------

def test_closed_terms_have_their_arithmetic_values():
    assert val(parse_term("(S(0)+S(S(0)))")) == 3
    assert val(parse_term("(S(S(0))*(S(0)+S(S(0))))")) == 6
    assert val(num(9)) == 9


def test_open_terms_need_an_assignment():
    assert term_eval(parse_term("(S(S(x))*S(y))"), {0: 2, 1: 5}) == 24
    with pytest.raises(OpenTermError):
        val(parse_term("S(x0)"))
    with pytest.raises(UnboundVariableError):
        term_eval(parse_term("(x0+x1)"), {0: 1})


@given(closed_terms())
def test_numeral_of_a_value_evaluates_back(term):
    assert val(num(val(term))) == val(term)


# ---------------------------------------------------------------------------
# Truth values
# ---------------------------------------------------------------------------

def test_kleene_tables():
    t, f, u = Truth.TRUE, Truth.FALSE, Truth.UNKNOWN
    assert ~t is f and ~f is t and ~u is u
    assert (f & u) is f and (t & u) is u and (t & t) is t
    assert (t | u) is t and (f | u) is u and (f | f) is f
    assert Truth.of(None) is u
    assert u.as_bool() is None


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def test_negative_budget_is_rejected():
    with pytest.raises(ValueError):
        Evaluator(-1)


def test_open_formulas_are_not_evaluated():
    with pytest.raises(NotASentenceError):
        evaluate(parse("x0=0"))


def test_witness_is_reported():
    verdict = evaluate(parse("E x.(x+x)=S(S(S(S(0))))"), budget=8)
    assert verdict.verdict == "true"
    assert verdict.certificate[0].role == "witness"
    assert verdict.certificate[0].value == 2


def test_universal_counterexample_is_reported():
    verdict = evaluate(parse("A x.!(x=S(S(S(0))))"), budget=8)
    assert verdict.verdict == "false"
    step = verdict.certificate[0]
    assert (step.role, step.value) == ("counterexample", 3)


def test_unbounded_search_can_run_out():
    verdict = evaluate(parse("E x.(x=S(x))"), budget=16)
    assert verdict.verdict == "unknown"
    assert not verdict.determined
    assert verdict.certificate == []


def test_comparisons_are_decided_arithmetically():
    le = bounded_le(num(3), num(1000), 7)
    assert match_comparison(le) == (7, num(3), num(1000))
    verdict = evaluate(le, budget=0)
    assert verdict.verdict == "true"
    assert verdict.certificate[0].value == 997
    refuted = evaluate(bounded_le(num(5), num(2), 7), budget=0)
    assert refuted.verdict == "false"
    assert refuted.certificate[0].role == "exhausted"


def test_guarded_quantifiers_are_searched_exhaustively():
    # A x1.(x1 <= 5 -> !(x1+x1 = 7))
    guard = bounded_le(Var(1), num(5), 2)
    phi = Forall(1, Or(Not(guard), Not(Eq(parse_term("(x1+x1)"), num(7)))))
    assert match_bounded(phi) is not None
    verdict = evaluate(phi, budget=5)
    assert verdict.verdict == "true"
    assert verdict.certificate[-1].role == "exhausted"
    # over budget the bound is no longer searched exhaustively
    assert evaluate(phi, budget=4).verdict == "unknown"


def test_bounded_existential_can_fail():
    phi = Exists(1, And(bounded_le(Var(1), num(3), 2), Eq(Var(1), num(9))))
    assert evaluate(phi, budget=8).verdict == "false"


def test_vacuous_quantifier_evaluates_its_body():
    assert evaluate(parse("E x5.(0=S(0))"), budget=0).verdict == "false"
    assert evaluate(parse("A x5.(0=0)"), budget=0).verdict == "true"


def test_connectives_absorb_unknown_sides():
    loop = "E x.(x=S(x))"
    assert evaluate(parse(f"(0=0|{loop})"), budget=4).verdict == "true"
    assert evaluate(parse(f"({loop}|0=0)"), budget=4).verdict == "true"
    assert evaluate(parse(f"(0=S(0)&{loop})"), budget=4).verdict == "false"
    assert evaluate(parse(f"(0=0&{loop})"), budget=4).verdict == "unknown"


def test_evaluator_is_a_truth_oracle():
    engine = Evaluator(4)
    assert engine(parse("0=0")) is True
    assert engine(parse("0=S(0)")) is False
    assert engine(parse("E x.(x=S(x))")) is None


@given(sentences())
def test_larger_budgets_never_overturn_a_verdict(phi):
    small = Evaluator(2).truth(phi)
    large = Evaluator(5).truth(phi)
    if small is not Truth.UNKNOWN and large is not Truth.UNKNOWN:
        assert small is large


@given(formulas(max_leaves=4, term_leaves=3).flatmap(lambda phi: st.tuples(st.just(phi), assignments_for(phi, 3))))
def test_evaluation_matches_brute_force_where_both_decide(case):
    phi, alpha = case
    sentence = instantiate(phi, alpha)
    mine = Evaluator(4)(sentence)
    reference = brute_force(sentence, bound=4)
    if mine is not None and reference is not None:
        assert mine == reference


def _equal_valued(value: int, spelling: int):
    if spelling == 0 or value == 0:
        return Mul(num(value), Succ(Zero()))
    return Add(num(value - 1), Succ(Zero()))


@given(
    formulas(max_leaves=4, term_leaves=3).flatmap(
        lambda phi: st.tuples(st.just(phi), assignments_for(phi, 3), st.integers(min_value=0, max_value=1))
    )
)
def test_equal_valued_instances_get_the_same_verdict(case):
    phi, alpha, spelling = case
    by_numeral = instantiate(phi, alpha)
    by_term = phi
    for index, value in alpha.items():
        by_term = substitute(by_term, index, _equal_valued(value, spelling))
    engine = Evaluator(6)
    assert engine.truth(by_numeral) is engine.truth(by_term)


def test_guard_bounds_are_read_by_value():
    x = Var(0)
    body = Or(Not(bounded_le(x, Var(1), 2)), Eq(Mul(x, Zero()), Zero()))
    phi = Forall(0, body)
    by_numeral = substitute(phi, 1, num(3))
    by_term = substitute(phi, 1, Add(num(2), Succ(Zero())))
    assert Evaluator(3).truth(by_numeral) is Evaluator(3).truth(by_term) is Truth.TRUE
    assert Evaluator(2).truth(by_numeral) is Evaluator(2).truth(by_term) is Truth.UNKNOWN
