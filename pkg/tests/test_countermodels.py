from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st
from pydantic import ValidationError

from src.kernel.budgets import CutModelBudget
from src.kernel.countermodels import audit_construction, construct_A, construct_B
from src.kernel.errors import FreshExhaustedError
from src.kernel.generators import random_cut_model
from src.models import CutModel


def test_construction_a_sends_fresh_elements_to_t():
    m = CutModel(size=10, cut=5, sequences=[[1, 2], [7], []])
    trace = construct_A(m)
    assert [(s.branch, s.added_a, s.added_b) for s in trace.steps] == [
        ("extend", 0, 1),
        ("extend", 2, 7),
        ("keep", None, None),
    ]
    assert trace.final_t == [0, 2]
    assert trace.extensions == 2
    assert audit_construction(trace, m, "A").verdict == "pass"


def test_construction_a_keeps_absorbed_sequences():
    m = CutModel(size=10, cut=5, sequences=[[3], [0]])
    trace = construct_A(m)
    assert [s.branch for s in trace.steps] == ["extend", "keep"]
    assert trace.final_t == [0]


def test_construction_a_runs_out_below_a_small_cut():
    with pytest.raises(FreshExhaustedError) as info:
        construct_A(CutModel(size=10, cut=1, sequences=[[5], [6]]))
    assert info.value.step == 1


def test_construction_b_plants_adjacent_pairs():
    m = CutModel(size=20, cut=10, threshold=2, sequences=[[3, 4], [9, 15, 16], [15, 14], [12, 15]])
    trace = construct_B(m)
    assert [s.branch for s in trace.steps] == ["finite", "extend", "skip", "extend"]
    assert (trace.steps[1].added_a, trace.steps[1].added_b) == (9, 15)
    assert (trace.steps[3].added_a, trace.steps[3].added_b) == (12, 15)
    assert trace.steps[3].note == "descent into B at 1"
    assert trace.final_t == [*range(10), 12]
    assert trace.skips == [2]

    audit = audit_construction(trace, m, "B")
    assert audit.violations == []
    assert "skipped steps: [2]" in audit.notes


def test_snapshot_replays_the_steps():
    m = CutModel(size=20, cut=10, threshold=2, sequences=[[9, 15, 16], [12, 15]])
    trace = construct_B(m)
    a, b = trace.snapshot(1)
    assert b == {15} and 12 not in a
    a, _ = trace.snapshot(2)
    assert 12 in a


def test_tampered_traces_fail_the_audit():
    m = CutModel(size=10, cut=5, sequences=[[1, 2], [7]])
    trace = construct_A(m)
    trace.final_t = [0]
    assert {"final", "count"} <= audit_construction(trace, m, "A").families()

    m = CutModel(size=20, cut=10, threshold=2, sequences=[[9, 15, 16]])
    trace = construct_B(m)
    trace.final_t = [*trace.final_t, 15]
    assert "disjointness" in audit_construction(trace, m, "B").families()


@given(st.integers(min_value=0, max_value=10**6))
def test_random_cut_models_pass_both_audits(seed):
    budget = CutModelBudget(size=200, cut=100, sequences=20, max_length=20, suite_threshold=5)
    m = random_cut_model(random.Random(seed), budget)
    assert audit_construction(construct_A(m), m, "A").verdict == "pass"
    assert audit_construction(construct_B(m), m, "B").verdict == "pass"


def test_cut_model_bounds():
    with pytest.raises(ValidationError):
        CutModel(size=5, cut=5)
    with pytest.raises(ValidationError):
        CutModel(size=5, cut=2, sequences=[[1, 5]])
    assert CutModel(size=100, cut=50).effective_threshold() == 5
    assert CutModel(size=100, cut=50, threshold=0).effective_threshold() == 1
