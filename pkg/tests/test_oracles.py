from __future__ import annotations

import pytest

from src.kernel.coding import num
from src.kernel.oracles import brute_force, mp_accepts, term_value
from src.kernel.semantics import bounded_le
from src.kernel.syntax import And, Eq, Forall, Mul, Not, Or, Var, Zero, parse, parse_term
from src.models import ProofFile, ProofLine

loop = parse("E x.(x=S(x))")


def test_term_value():
    assert term_value(parse_term("((S(0)+x0)*S(S(0)))"), {0: 2}) == 6
    with pytest.raises(KeyError):
        term_value(Var(3), {})


@pytest.mark.parametrize(
    "text, expected",
    [
        ("E x.((x+S(0))=S(S(S(0))))", True),
        ("E x.((x+S(S(0)))=S(0))", False),
        ("E x5.(0=0)", True),
        ("E x.((x*x)=S(S(S(S(0)))))", True),
        ("E x.(x=S(x))", None),
        ("A x.((x+0)=x)", None),
    ],
)
def test_brute_force_quantifiers(text, expected):
    assert brute_force(parse(text), bound=8) is expected


def test_guarded_quantifiers_are_searched_up_to_their_bound():
    x = Var(0)
    phi = Forall(0, Or(Not(bounded_le(x, num(3), 1)), Eq(Mul(x, Zero()), Zero())))
    assert brute_force(phi, bound=3) is True
    assert brute_force(phi, bound=2) is None


def test_brute_force_connectives_absorb():
    assert brute_force(Or(loop, parse("0=0"))) is True
    assert brute_force(And(loop, parse("0=S(0)"))) is False
    assert brute_force(And(loop, parse("0=0"))) is None
    assert brute_force(Not(loop)) is None


def test_brute_force_reads_the_environment():
    assert brute_force(parse("x0=S(0)"), env={0: 1}) is True


def _proof(*lines: tuple[str, list[int]]) -> ProofFile:
    return ProofFile(lines=[
        ProofLine(formula=text, rule="mp" if cites else "premise", cites=cites) for text, cites in lines
    ])


def test_mp_closure_accepts_correct_citations():
    assert mp_accepts(_proof(("0=0", []), ("(!(0=0)|S(0)=S(0))", []), ("S(0)=S(0)", [0, 1])))
    assert mp_accepts(ProofFile(lines=[]))


@pytest.mark.parametrize(
    "lines",
    [
        [("0=0", []), ("(!(0=0)|S(0)=S(0))", []), ("S(0)=S(0)", [1, 0])],
        [("0=0", []), ("S(0)=S(0)", [0, 0])],
        [("x0=0", [])],
        [("0=", [])],
    ],
)
def test_mp_closure_rejects_bad_derivations(lines):
    assert not mp_accepts(_proof(*lines))


def test_premises_may_not_cite():
    assert not mp_accepts(ProofFile(lines=[ProofLine(formula="0=0", rule="premise", cites=[0])]))
