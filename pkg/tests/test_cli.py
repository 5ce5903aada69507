from __future__ import annotations

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from src import lab
from src.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def invoke(config_file):
    runner = CliRunner(mix_stderr=False)

    def run(*args: str):
        result = runner.invoke(main, ["--config", str(config_file), *args])
        document = json.loads(result.stdout) if result.stdout.strip() else None
        return result, document

    return run


def test_eval_prints_a_verdict(invoke):
    result, document = invoke("eval", "E x.((x+x)=S(S(S(S(0)))))")
    assert result.exit_code == 0
    assert document["kind"] == "verdict"
    assert document["verdict"] == "true"
    assert document["budget"] == 32


def test_unknown_verdict_exits_two(invoke):
    result, document = invoke("eval", "E x.(x=S(x))", "--budget", "4")
    assert result.exit_code == 2
    assert document["verdict"] == "unknown"


def test_parse_errors_exit_two(invoke):
    result, document = invoke("eval", "E x.(x=")
    assert result.exit_code == 2
    assert document is None
    assert result.stderr.startswith("error:")


def test_parse_and_encode(invoke):
    _, parsed = invoke("parse", "(S(0)+S(0))", "--term")
    assert parsed["value"] == 2
    _, coded = invoke("encode", "0", "--term")
    assert coded["code"] == "21"
    _, decoded = invoke("encode", "--decode", "55")
    assert decoded["formula"] == "x0"


def test_principle_checks_map_to_exit_codes(invoke):
    result, document = invoke("check", "--principle", "dcout", "--input", str(DATA / "inputs" / "dcout_fault.json"))
    assert result.exit_code == 1
    assert document["kind"] == "principle-report"
    assert document["verdict"] == "fail"
    result, document = invoke("check", "--principle", "proof", "--input", str(DATA / "inputs" / "proof_mp.json"))
    assert result.exit_code == 0
    assert document["kind"] == "proof-report"


def test_missing_input_exits_two(invoke, tmp_path):
    result, _ = invoke("check", "--principle", "dc", "--input", str(tmp_path / "absent.json"))
    assert result.exit_code == 2


def test_disjunction_and_yablo_commands(invoke):
    result, document = invoke("disj", "build", "--kind", "negconj", "--input", str(DATA / "inputs" / "psi_source.json"))
    assert result.exit_code == 0
    assert document["builder"] == "negconj"
    result, document = invoke("yablo", "run", "--seq", str(DATA / "inputs" / "psi_source.json"))
    assert result.exit_code == 0
    assert document["passed"] is True


def test_ev_and_cutmodel_commands(invoke):
    result, document = invoke("ev", "run", str(DATA / "scenarios" / "balanced_falsity.json"), "--audit", "summary")
    assert result.exit_code == 0
    assert all(audit["details"] == [] for audit in document["audits"])
    result, document = invoke("cutmodel", "run", "--which", "B", "--seqs", str(DATA / "inputs" / "cutmodel_small.json"))
    assert result.exit_code == 0
    assert document["kind"] == "cutmodel-run"


def test_suite_is_deterministic(invoke, tmp_path):
    output = tmp_path / "suite.json"
    first, document = invoke("suite", "--only", "examples", "--output", str(output))
    second, again = invoke("suite", "--only", "examples")
    assert first.exit_code == 0
    assert first.stdout == second.stdout
    assert [check["id"] for check in document["checks"]] == ["examples"]
    assert json.loads(output.read_text(encoding="utf-8")) == document


def test_module_wrappers_share_one_service():
    assert lab.describe("0=0")["sentence"] is True
    assert lab.evaluate_text("0=S(0)", budget=4).verdict == "false"
    assert lab.decode_text(lab.encode_text("0=0")["code"])["formula"] == "0=0"
    assert lab.check_principle("int", str(DATA / "inputs" / "int_even.json")).verdict == "pass"
    assert lab.run_scenario(str(DATA / "scenarios" / "long_disjunction.json")).passed
    assert Path(lab.reports_dir()).name == "reports"
