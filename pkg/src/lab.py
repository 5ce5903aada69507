"""Module-level wrappers around one shared lab service."""

from __future__ import annotations

from .kernel.repository import DataStore
from .kernel.services import LabService


_DATA_STORE = DataStore()
_SERVICE = LabService(_DATA_STORE)

BASE_DIR = str(_DATA_STORE.base_dir)


def data_dir() -> str:
    _SERVICE.get_config()
    return str(_DATA_STORE.data_dir)


def reports_dir() -> str:
    _SERVICE.get_config()
    return str(_DATA_STORE.reports_dir)


# ---------------------------------------------------------------------------
# Syntax helpers
# ---------------------------------------------------------------------------

def describe(text: str, term: bool = False) -> dict:
    return _SERVICE.describe(text, term=term)


def encode_text(text: str, term: bool = False) -> dict:
    return _SERVICE.encode_text(text, term=term)


def decode_text(code: str) -> dict:
    return _SERVICE.decode_text(code)


def evaluate_text(text: str, budget: int | None = None):
    return _SERVICE.evaluate_text(text, _SERVICE.profile(budget=budget))


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------

def check_principle(principle: str, path: str, budget: int | None = None, variant: str | None = None):
    profile = _SERVICE.profile(budget=budget, variant=variant)
    return _SERVICE.check_principle(principle, _SERVICE.load_check_input(path), profile)


def run_scenario(path: str, long_cut: int | None = None, include_pairs: bool = False):
    return _SERVICE.run_scenario(_SERVICE.load_scenario(path), long_cut=long_cut, include_pairs=include_pairs)


def run_suite(seed: int | None = None, budget: int | None = None, only: str | None = None):
    return _SERVICE.run_suite(_SERVICE.profile(seed=seed, budget=budget), only)


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

def get_config() -> dict:
    return _SERVICE.get_config()


def get_profile():
    return _SERVICE.get_profile()


def set_config_path(path: str | None) -> None:
    _SERVICE.set_config_path(path)
