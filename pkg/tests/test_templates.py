from __future__ import annotations

from hypothesis import given

from src.kernel.syntax import alpha_equal, parse, parse_term, to_text
from src.kernel.templates import ext_equiv, regularity_key, similar, template, template_defects

from .strategies import formulas


def test_template_of_a_quantified_equation():
    phi = parse("E x.((S(S(x))+S(y))=((z*(y+S(0)))*x))")
    tpl = template(phi)
    assert to_text(tpl.template) == "E x2.((S(S(x2))+x0)=(x1*x2))"
    assert [to_text(slot) for slot in tpl.slots] == ["S(x1)", "(x2*(x1+S(0)))"]
    assert tpl.arity == 2


def test_quantifier_free_equations_share_one_template():
    shapes = {template(parse(text)).template for text in ["0=0", "S(0)=(x0*x1)", "(x3+0)=S(S(x3))"]}
    assert {to_text(shape) for shape in shapes} == {"x0=x1"}
    assert similar(parse("0=S(0)"), parse("(x0+x0)=x1"))


def test_templates_see_through_bound_variable_names():
    assert similar(parse("E x0.(x0=S(0))"), parse("E x7.(x7=(0+0))"))
    assert not similar(parse("E x0.(x0=S(0))"), parse("E x0.(S(x0)=0)"))
    assert not similar(parse("E x0.(x0=0)"), parse("A x0.(x0=0)"))


@given(formulas())
def test_every_template_meets_its_conditions(phi):
    tpl = template(phi)
    assert template_defects(tpl, phi) == []
    assert alpha_equal(tpl.reconstruct(), phi)


def test_defects_name_the_broken_condition():
    phi = parse("E x.(x=S(0))")
    wrong = template(parse("E x.(x=0)"))
    assert "reconstruction" in template_defects(wrong, phi)


def test_regularity_key_records_slot_values():
    shape, values = regularity_key(parse("x0=S(x1)"), {0: 3, 1: 4})
    assert to_text(shape) == "x0=x1"
    assert values == (3, 5)


def test_extensionally_equivalent_pairs_get_a_witness():
    witness = ext_equiv(
        (parse("E x.((x+y)=S(S(0)))"), {1: 2}),
        (parse("E x.((x+(u*v))=(w+S(0)))"), {1: 2, 2: 1, 3: 1}),
    )
    assert witness is not None
    assert to_text(witness.template) == "E x2.((x2+x0)=x1)"
    assert [to_text(slot) for slot in witness.right] == ["(S(S(0))*S(0))", "(S(0)+S(0))"]
    assert len(witness.left) == 2


def test_differing_values_are_not_equivalent():
    first = (parse("E x.((x+y)=S(S(0)))"), {1: 2})
    second = (parse("E x.((x+y)=S(S(0)))"), {1: 1})
    assert ext_equiv(first, second) is None
    assert ext_equiv(first, (parse("E x.((y+x)=S(S(0)))"), {1: 2})) is None


def test_slot_terms_keep_their_text():
    assert to_text(parse_term("(x0*(x1+S(0)))")) == "(x0*(x1+S(0)))"
