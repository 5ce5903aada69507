from __future__ import annotations

import random

from hypothesis import given
from hypothesis import strategies as st

from src.kernel.budgets import CutModelBudget, EVBudget
from src.kernel.disjunctions import spine_count
from src.kernel.generators import (
    decidable_pool,
    estimated_code_bits,
    random_cut_model,
    random_proof,
    random_scenario,
    random_sentence,
    random_tree,
    yablo_ready,
)
from src.kernel.oracles import mp_accepts
from src.kernel.semantics import Evaluator
from src.kernel.syntax import Not, Succ, Zero, parse

seeds = st.integers(min_value=0, max_value=10**6)


def test_generators_are_deterministic_per_seed():
    assert random_sentence(random.Random(4)) == random_sentence(random.Random(4))
    assert decidable_pool(random.Random(9), 5) == decidable_pool(random.Random(9), 5)
    budget = CutModelBudget(size=50, cut=20, sequences=5, max_length=8)
    assert random_cut_model(random.Random(2), budget) == random_cut_model(random.Random(2), budget)


def test_code_size_estimate():
    assert estimated_code_bits(Zero()) == 8
    assert estimated_code_bits(Succ(Zero())) == 34
    assert estimated_code_bits(Not(parse("0=0"))) > estimated_code_bits(parse("0=0"))


@given(seeds)
def test_random_trees_respect_the_estimate(seed):
    tree = random_tree(random.Random(seed), depth=6, max_bits=1 << 10)
    assert estimated_code_bits(tree) <= 1 << 10


@given(seeds)
def test_random_sentences_are_closed(seed):
    assert not random_sentence(random.Random(seed), depth=4).free


@given(seeds)
def test_pools_are_decided_and_distinct(seed):
    engine = Evaluator(16)
    pool = decidable_pool(random.Random(seed), 6, engine)
    assert len(set(pool)) == 6
    assert all(engine(phi) is not None for phi in pool)


@given(seeds)
def test_yablo_ready_sequences_are_true(seed):
    rng = random.Random(seed)
    engine = Evaluator(16)
    phis = yablo_ready(rng, decidable_pool(rng, 4, engine), 8, engine)
    assert len(phis) == 8
    assert all(engine(phi) is True for phi in phis)


@given(seeds)
def test_random_cut_models_fit_their_budget(seed):
    budget = CutModelBudget(size=60, cut=30, sequences=12, max_length=10, suite_threshold=4)
    m = random_cut_model(random.Random(seed), budget)
    assert (m.size, m.cut, len(m.sequences)) == (60, 30, 12)
    assert all(len(seq) <= 10 for seq in m.sequences)
    assert m.effective_threshold() == 4
    assert random_cut_model(random.Random(seed), budget, threshold=2).effective_threshold() == 2


@given(seeds)
def test_random_scenarios_have_a_long_target_past_the_cut(seed):
    budget = EVBudget()
    sc = random_scenario(random.Random(seed), budget)
    low, high = budget.long_cut_range
    assert low <= sc.long_cut <= high
    assert spine_count(sc.targets[0]) > sc.long_cut
    assert all(phi in sc.environment for phi in sc.targets)
    assert sc.universe == budget.universe


@given(seeds)
def test_uncorrupted_proofs_are_accepted(seed):
    rng = random.Random(seed)
    pool = decidable_pool(rng, 4, Evaluator(16))
    proof = random_proof(rng, pool, max_lines=8, corrupt=0.0)
    assert 1 <= len(proof.lines) <= 8
    assert mp_accepts(proof)
