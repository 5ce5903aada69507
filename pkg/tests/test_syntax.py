from __future__ import annotations

import pytest
from hypothesis import given

from src.kernel.coding import num
from src.kernel.errors import NotASentenceError, OpenTermError, ParseError, UnboundVariableError
from src.kernel.syntax import (
    Add,
    And,
    Assignment,
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
    alpha_equal,
    dag_size,
    direct_subformulas,
    flat_size,
    formula_depth,
    fresh_variable,
    from_json,
    instantiate,
    is_sentence,
    parse,
    parse_term,
    preview,
    require_sentence,
    sentence_seq,
    sharing_disabled,
    subformulas,
    substitute,
    to_json,
    to_text,
)

from .strategies import formulas, terms


# ---------------------------------------------------------------------------
# Printing and parsing
# ---------------------------------------------------------------------------

@given(formulas())
def test_printed_formulas_parse_back(phi):
    assert parse(to_text(phi)) == phi


@given(terms())
def test_printed_terms_parse_back(term):
    assert parse_term(to_text(term)) == term


def test_equations_are_wrapped_under_negation_and_quantifiers():
    assert to_text(Not(Eq(Zero(), Zero()))) == "!(0=0)"
    phi = Exists(0, Eq(Add(Var(0), Var(1)), num(2)))
    assert to_text(phi) == "E x0.((x0+x1)=S(S(0)))"
    assert to_text(Or(Eq(Zero(), Zero()), Eq(Var(0), Zero()))) == "(0=0|x0=0)"


def test_named_variables_take_the_least_free_indices():
    assert parse("E x.((x+y)=S(S(0)))") == Exists(0, Eq(Add(Var(0), Var(1)), num(2)))
    assert parse("(y=x0)") == Eq(Var(1), Var(0))
    assert parse("(a=b&b=c)") == And(Eq(Var(0), Var(1)), Eq(Var(1), Var(2)))


def test_parenthesized_formulas_are_accepted():
    assert parse("((0=0))") == Eq(Zero(), Zero())
    assert parse("!0=0") == Not(Eq(Zero(), Zero()))


def test_parse_error_reports_a_position():
    with pytest.raises(ParseError) as info:
        parse("(0=0")
    assert info.value.line == 1
    assert info.value.column is not None


@pytest.mark.parametrize("text", ["", "0", "E 0.(0=0)", "(0=0|)", "S(0)=", "x0"])
def test_malformed_text_is_rejected(text):
    with pytest.raises(ParseError):
        parse(text)


def test_term_parser_rejects_formulas():
    with pytest.raises(ParseError):
        parse_term("0=0")


def test_preview_truncates_long_output():
    phi = Eq(num(200), Zero())
    text = preview(phi, limit=20)
    assert text.endswith("...")
    assert len(text) == 23


# ---------------------------------------------------------------------------
# Sharing and sizes
# ---------------------------------------------------------------------------

def test_structurally_equal_nodes_are_shared():
    assert parse("(0=0|0=0)") is Or(Eq(Zero(), Zero()), Eq(Zero(), Zero()))
    assert Succ(Zero()) is num(1)


def test_sharing_can_be_disabled():
    with sharing_disabled():
        first = Eq(Zero(), Zero())
        second = Eq(Zero(), Zero())
    assert first == second
    assert first is not second
    assert hash(first) == hash(second)


def test_dag_size_stays_linear_while_flat_size_doubles():
    phi = Eq(Zero(), Zero())
    for _ in range(20):
        phi = Or(phi, phi)
    assert flat_size(phi) == 4 * 2**20 - 1
    assert dag_size(phi) == 22


def test_formula_depth_counts_formula_constructors():
    assert formula_depth(parse("0=0")) == 1
    assert formula_depth(parse("E x0.(!(x0=0)|0=0)")) == 4


def test_subformulas_are_listed_once_in_preorder():
    phi = parse("(0=0|!(0=0))")
    assert subformulas(phi) == [phi, Eq(Zero(), Zero()), Not(Eq(Zero(), Zero()))]
    assert direct_subformulas(phi) == [Eq(Zero(), Zero()), Not(Eq(Zero(), Zero()))]


# ---------------------------------------------------------------------------
# Variables and substitution
# ---------------------------------------------------------------------------

def test_free_variables_exclude_bound_ones():
    assert parse("E x0.(x0=x1)").free == {1}
    assert is_sentence(parse("A x0.(x0=x0)"))
    assert not is_sentence(parse("x0=0"))


def test_fresh_variable_avoids_free_and_bound_indices():
    assert fresh_variable(parse("E x3.(x3=x1)")) == 4
    assert fresh_variable(parse("0=0")) == 0


def test_substitution_leaves_bound_occurrences_alone():
    phi = parse("(x0=0|E x0.(x0=0))")
    assert substitute(phi, 0, num(1)) == parse("(S(0)=0|E x0.(x0=0))")


def test_substitution_requires_a_closed_term():
    with pytest.raises(OpenTermError):
        substitute(parse("x0=0"), 0, Var(1))


def test_instantiate_needs_every_free_variable():
    assert instantiate(parse("(x0+x1)=x1"), {0: 2, 1: 0}) == parse("(S(S(0))+0)=0")
    with pytest.raises(UnboundVariableError) as info:
        instantiate(parse("(x0+x1)=x1"), {0: 2})
    assert info.value.missing == {1}


def test_alpha_equality_renames_bound_variables_only():
    assert alpha_equal(parse("E x0.(x0=x2)"), parse("E x1.(x1=x2)"))
    assert not alpha_equal(parse("E x0.(x0=x1)"), parse("E x1.(x1=x1)"))
    assert not alpha_equal(parse("E x0.(x0=0)"), parse("A x0.(x0=0)"))


def test_sentence_sequences_reject_open_formulas():
    assert sentence_seq([parse("0=0")]) == (parse("0=0"),)
    with pytest.raises(NotASentenceError):
        sentence_seq([parse("0=0"), parse("x0=0")])
    with pytest.raises(NotASentenceError):
        require_sentence(parse("x0=0"))


def test_constructors_check_their_arguments():
    with pytest.raises(TypeError):
        Eq(Zero(), Eq(Zero(), Zero()))
    with pytest.raises(TypeError):
        Not(Zero())
    with pytest.raises(ValueError):
        Var(-1)
    with pytest.raises(ValueError):
        Exists(True, Eq(Zero(), Zero()))


# ---------------------------------------------------------------------------
# Assignments and JSON
# ---------------------------------------------------------------------------

def test_assignments_are_immutable_maps():
    alpha = Assignment({1: 4, 0: 2})
    assert list(alpha) == [0, 1]
    assert alpha.updated(1, 7) == {0: 2, 1: 7}
    assert alpha == {0: 2, 1: 4}
    assert alpha.restrict([1]) == Assignment({1: 4})
    assert Assignment.from_json({"x0": 2, "1": 4}) == alpha
    assert alpha.to_json() == {"0": 2, "1": 4}
    with pytest.raises(ValueError):
        Assignment({0: -1})


@given(formulas())
def test_json_records_round_trip(phi):
    assert from_json(to_json(phi)) == phi


def test_bad_json_records_are_parse_errors():
    with pytest.raises(ParseError):
        from_json({"op": "Nope", "args": []})
    with pytest.raises(ParseError):
        from_json({"op": "Succ", "args": []})


def test_terms_and_formulas_are_distinct_sorts():
    assert isinstance(Mul(Zero(), Zero()), Term)
    assert not isinstance(Add(Zero(), Zero()), Formula)
    assert not is_sentence(Zero())
    assert Forall(0, Eq(Var(0), Var(0))).free == frozenset()
