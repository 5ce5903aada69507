from __future__ import annotations

import pytest

from src.kernel.constants import CHECK_IDS
from src.kernel.suite import run_dc, run_determinism, run_examples, run_suite
from src.models import EXIT_CODES


@pytest.fixture(scope="module")
def small_report(small_profile):
    return run_suite(small_profile)


def test_every_check_passes_on_the_small_profile(small_report):
    failing = {check.id: check.details for check in small_report.checks if check.status != "pass"}
    assert failing == {}
    assert small_report.status == "pass"
    assert EXIT_CODES[small_report.status] == 0


def test_checks_are_reported_in_order(small_report):
    assert tuple(check.id for check in small_report.checks) == CHECK_IDS
    assert all(check.samples > 0 for check in small_report.checks)


def test_worked_examples(small_profile):
    assert run_examples(small_profile).failures == 0


def test_seeded_runs_repeat(small_profile):
    assert run_determinism(small_profile).status == "pass"
    first = run_suite(small_profile, only="examples,coding")
    second = run_suite(small_profile, only="examples,coding")
    assert first.model_dump() == second.model_dump()


def test_only_selects_by_prefix(small_profile):
    report = run_suite(small_profile, only="construction")
    assert [check.id for check in report.checks] == ["construction-a", "construction-b"]
    assert run_suite(small_profile, only="nothing").checks == []


def test_zero_budget_leaves_disjunctions_undetermined(small_profile):
    check = run_dc(small_profile.with_overrides(budget=0))
    assert check.failures == 0
    assert check.undetermined > 0
    assert check.status == "undetermined"
    report = run_suite(small_profile.with_overrides(budget=0), only="dc")
    assert report.status == "undetermined"
    assert EXIT_CODES[report.status] == 2


def test_kernel_package_exposes_its_modules():
    import src.kernel as kernel

    assert kernel.suite.run_suite is run_suite
    assert "oracles" in dir(kernel)
    with pytest.raises(AttributeError):
        kernel.missing


def test_injection_names_the_checkers_it_cannot_fault(small_report):
    injection = next(check for check in small_report.checks if check.id == "injection")
    assert any("seqind, seqoind and int" in line for line in injection.details)
