from __future__ import annotations

import json
from dataclasses import replace

import pytest
from hypothesis import HealthCheck, settings

from src.kernel.budgets import CutModelBudget, LabProfile, SuiteBudget
from src.kernel.repository import DataStore
from src.kernel.services import LabService

settings.register_profile(
    "lab",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("lab")


SMALL_SUITE = SuiteBudget(
    coding_samples=50,
    coding_depth=5,
    oracle_samples=40,
    dc_samples=10,
    dc_max_length=8,
    yablo_samples=10,
    yablo_max_length=16,
    outer_samples=10,
    outer_max_length=6,
    tautology_max_length=4,
    ev_samples=5,
    cutmodel_samples=3,
    injections=14,
    proof_samples=20,
    proof_max_lines=8,
)
SMALL_CUTMODEL = CutModelBudget(size=200, cut=100, sequences=40, max_length=20, suite_threshold=5)


@pytest.fixture(scope="session")
def small_profile() -> LabProfile:
    return replace(LabProfile(), suite=SMALL_SUITE, cutmodel=SMALL_CUTMODEL)


@pytest.fixture
def store(tmp_path) -> DataStore:
    return DataStore(tmp_path)


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(
        json.dumps(
            {
                "paths": {"reports_dir": "./out/reports"},
                "lab": {
                    "seed": 11,
                    "evaluation": {"budget": 32},
                    "suite": {"coding_samples": 20, "oracle_samples": 10},
                    "cutmodel": {"size": 200, "cut": 100, "sequences": 20, "max_length": 20, "suite_threshold": 5},
                },
            }
        ),
        encoding="utf-8",
    )
    return path


@pytest.fixture
def service(store, config_file) -> LabService:
    return LabService(store)


@pytest.fixture
def write_json(tmp_path):
    def write(name: str, data: object):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return write
