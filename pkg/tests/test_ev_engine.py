from __future__ import annotations

import json
from pathlib import Path

import pytest

from src.kernel.errors import MultiVariableError, NotPresatError, ScenarioError
from src.kernel.ev_engine import (
    EVScenario,
    PartialSatClass,
    assignments,
    check_internal_induction,
    class_graph,
    complete_presat,
    compositional_pairs,
    ev_construct,
    greatest_domain,
    subformula_closure,
    validate_sat_class,
)
from src.kernel.syntax import Assignment, Not, Or, parse
from src.models import ScenarioFile

SCENARIOS = Path(__file__).resolve().parent.parent / "data" / "scenarios"

zero = parse("x0=0")


def _scenario(name: str) -> ScenarioFile:
    return ScenarioFile.model_validate(json.loads((SCENARIOS / name).read_text(encoding="utf-8")))


# ---------------------------------------------------------------------------
# Assignments and clauses
# ---------------------------------------------------------------------------

def test_assignments_cover_the_free_variables():
    assert len(assignments(parse("x0=x1"), 2)) == 4
    assert assignments(parse("0=0"), 5) == (Assignment(),)
    assert {alpha[0] for alpha in assignments(zero, 3)} == {0, 1, 2}


def test_compositional_pairs_follow_the_clauses():
    excluded = parse("(x0=0|!(x0=0))")
    pairs = compositional_pairs(subformula_closure([excluded]), 3)
    assert (zero, Assignment({0: 0})) in pairs
    assert (Not(zero), Assignment({0: 2})) in pairs
    assert (Not(zero), Assignment({0: 0})) not in pairs
    assert sum(1 for phi, _ in pairs if phi == excluded) == 3
    assert len(pairs) == 6


def test_seeded_formulas_ignore_their_clause():
    pairs = compositional_pairs([zero], 3, seeded=lambda phi: False)
    assert pairs == set()


# ---------------------------------------------------------------------------
# Satisfaction classes
# ---------------------------------------------------------------------------

def test_completion_adds_negations():
    sat = complete_presat([(zero, {0: 0})], [zero], 3)
    assert len(sat.pairs) == 3
    assert sat.holds(Not(zero), {0: 1})
    assert not sat.holds(Not(zero), {0: 0})
    assert validate_sat_class(sat, regularity=True).valid


@pytest.mark.parametrize(
    "pairs, domain, clause",
    [
        ([(zero, {0: 5})], [zero], "assignment"),
        ([(zero, {0: 0})], [], "domain"),
        ([], [Not(zero)], "closure"),
        ([], [zero], "comp"),
    ],
)
def test_completion_rejects_non_presatisfaction_classes(pairs, domain, clause):
    with pytest.raises(NotPresatError) as info:
        complete_presat(pairs, domain, 3)
    assert info.value.clause == clause


def test_validation_reports_each_family():
    sat = PartialSatClass(frozenset({(zero, Assignment({0: 1}))}), frozenset({zero}), 3)
    families = {v.family for v in validate_sat_class(sat).violations}
    assert {"comp", "totality"} <= families
    good = complete_presat([(zero, {0: 0})], [zero], 3)
    outside = validate_sat_class(good, environment=[])
    assert [v.family for v in outside.violations] == ["environment"]


def test_greatest_domain_drops_unsupported_formulas():
    pairs = {(zero, Assignment({0: 0}))}
    candidates = [zero, Not(zero), Or(zero, parse("x1=0"))]
    assert greatest_domain(pairs, candidates, 3) == frozenset({zero})


def test_candidates_enlarge_the_completed_domain():
    false = parse("0=S(0)")
    sat = complete_presat([(zero, {0: 0})], [zero], 3, candidates=[false, Not(zero)])
    assert sat.domain == frozenset({zero, false})
    assert sat.holds(Not(false), {})


# ---------------------------------------------------------------------------
# Similarity classes
# ---------------------------------------------------------------------------

def test_class_graph_ranks_by_subformula_order():
    disjunction = parse("(x0=0|x1=0)")
    graph = class_graph(subformula_closure([disjunction]))
    assert len(graph.classes) == 2
    assert graph.class_of[zero] == graph.class_of[parse("x1=0")]
    assert graph.ranks[graph.class_of[zero]] == 0
    assert graph.ranks[graph.class_of[disjunction]] == 1
    assert graph.height == 2


def test_empty_class_graph_has_no_height():
    assert class_graph([]).height == 0


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def test_long_disjunction_scenario_is_satisfied():
    scenario = EVScenario.from_file(_scenario("long_disjunction.json"))
    result, report = ev_construct(scenario, include_pairs=True)
    assert report.passed
    assert report.pairs is not None and len(report.pairs) == len(result.pairs)
    audit = next(audit for audit in report.audits if audit.name == "disjunction")
    assert (audit.status, audit.instances) == ("pass", 1)
    assert report.stages == len(report.stage_sizes)


def test_balanced_scenario_is_falsified():
    scenario = EVScenario.from_file(_scenario("balanced_falsity.json"))
    _, report = ev_construct(scenario)
    assert report.passed
    assert report.pairs is None
    names = [audit.name for audit in report.audits]
    assert "balanced-falsity" in names and "disjunction" not in names


def test_scenario_round_trips_through_its_file():
    scenario = EVScenario.from_file(_scenario("long_disjunction.json"))
    again = EVScenario.from_file(scenario.to_file())
    assert again.environment == scenario.environment
    assert again.targets == scenario.targets


def test_target_at_the_cut_is_rejected():
    data = ScenarioFile(targets=["(((x0=0|x0=S(0))|x0=S(S(0)))|x0=0)"], long_cut=4)
    with pytest.raises(ScenarioError):
        ev_construct(EVScenario.from_file(data))


def test_environment_must_be_closed():
    data = ScenarioFile(environment=["(x0=0|x0=S(0))"], targets=["(x0=0|x0=S(0))"])
    with pytest.raises(ScenarioError):
        ev_construct(EVScenario.from_file(data))


def test_inconsistent_base_is_rejected():
    data = ScenarioFile.model_validate({
        "targets": ["x0=0"],
        "base": {"domain": ["x0=0"], "pairs": [{"formula": "x0=0", "assignment": {"0": 1}}]},
        "complete_base": False,
    })
    with pytest.raises(NotPresatError):
        EVScenario.from_file(data)


# ---------------------------------------------------------------------------
# Internal induction
# ---------------------------------------------------------------------------

def _members(*values: int) -> PartialSatClass:
    return PartialSatClass(frozenset((zero, Assignment({0: x})) for x in values), frozenset(), 4)


def test_internal_induction_on_a_full_set():
    report = check_internal_induction(_members(0, 1, 2, 3), zero, 3)
    assert report.verdict == "pass" and report.notes == []


def test_internal_induction_notes_broken_steps():
    report = check_internal_induction(_members(0, 1), zero, 3)
    assert report.verdict == "pass"
    assert report.notes == ["broken steps: [1]"]
    assert check_internal_induction(_members(2), zero, 3).notes == ["broken steps: [2]", "base case fails"]


def test_internal_induction_on_closed_and_binary_formulas():
    closed = check_internal_induction(_members(), parse("0=0"), 3)
    assert closed.instances == 1
    with pytest.raises(MultiVariableError):
        check_internal_induction(_members(), parse("x0=x1"), 3)
