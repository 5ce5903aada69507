"""Command line entry point: ``python -m src.cli``."""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path
from typing import Any, NoReturn, Optional

import click
from pydantic import BaseModel, ValidationError

from .kernel.constants import (
    AUDIT_LEVELS,
    BUILDER_KINDS,
    KIND_CODE,
    KIND_CUTMODEL,
    KIND_DISJUNCTION,
    KIND_EV,
    KIND_PARSE,
    KIND_PRINCIPLE,
    KIND_PROOF,
    KIND_SUITE,
    KIND_VERDICT,
    KIND_YABLO,
    LOG_FORMAT,
    PRINCIPLES,
    VARIANTS,
)
from .kernel.errors import LabError
from .kernel.services import LabService
from .kernel.utils import choice_value
from .models import EXIT_CODES, STATUS_FAIL, STATUS_PASS, STATUS_UNDETERMINED, ProofReport, envelope

logger = logging.getLogger(__name__)

_INPUT_ERRORS = (LabError, ValidationError, FileNotFoundError, json.JSONDecodeError)


class LabGroup(click.Group):
    """Maps input and precondition errors to exit code 2."""

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except _INPUT_ERRORS as exc:
            logger.debug("[cli] input error", exc_info=exc)
            message = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
            click.echo(f"error: {message}", err=True)
            ctx.exit(2)


def _service(ctx: click.Context) -> LabService:
    return ctx.find_root().obj


def _emit(ctx: click.Context, kind: str, payload: BaseModel | dict, status: str = STATUS_PASS) -> NoReturn:
    document = envelope(kind, payload)
    click.echo(json.dumps(document, sort_keys=True, indent=2))
    ctx.exit(EXIT_CODES.get(status, 0))


def _save(ctx: click.Context, name: Optional[str], kind: str, payload: BaseModel) -> None:
    if name:
        path = _service(ctx).save_report(name, envelope(kind, payload))
        click.echo(f"saved {path}", err=True)


budget_option = click.option("--budget", type=click.IntRange(min=0), default=None, help="Evaluation budget.")
seed_option = click.option("--seed", type=int, default=None, help="Seed of the random generators.")
variant_option = click.option("--variant", type=click.Choice(VARIANTS), default=None, help="Quantifier instance variant.")
long_cut_option = click.option("--long-cut", type=click.IntRange(min=1), default=None, help="Spine length counted as long.")


@click.group(cls=LabGroup)
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None, help="Path to config.json.")
@click.option("--verbose", is_flag=True, help="Log progress on stderr.")
@click.option("--format", "output_format", type=click.Choice(["json"]), default="json", show_default=True)
@click.pass_context
def main(ctx: click.Context, config_path: Optional[str], verbose: bool, output_format: str) -> None:
    """Formal-syntax kernel and test lab for axiomatic truth theories."""

    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        format=LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    service = LabService()
    if config_path is not None:
        service.set_config_path(config_path)
    ctx.obj = service


# ---------------------------------------------------------------------------
# Syntax
# ---------------------------------------------------------------------------

@main.command("parse")
@click.argument("text")
@click.option("--term", is_flag=True, help="Parse a term instead of a formula.")
@click.pass_context
def parse_command(ctx: click.Context, text: str, term: bool) -> None:
    """Parse TEXT and print its canonical form and tree."""

    _emit(ctx, KIND_PARSE, _service(ctx).describe(text, term=term))


@main.command("encode")
@click.argument("text")
@click.option("--term", is_flag=True, help="Encode a term instead of a formula.")
@click.option("--decode", "decode_flag", is_flag=True, help="Treat TEXT as a code and decode it.")
@click.pass_context
def encode_command(ctx: click.Context, text: str, term: bool, decode_flag: bool) -> None:
    """Print the Goedel code of TEXT, or the tree a code stands for."""

    service = _service(ctx)
    payload = service.decode_text(text) if decode_flag else service.encode_text(text, term=term)
    _emit(ctx, KIND_CODE, payload)


@main.command("eval")
@click.argument("text")
@budget_option
@click.pass_context
def eval_command(ctx: click.Context, text: str, budget: Optional[int]) -> None:
    """Evaluate the sentence TEXT; exit 2 when the budget cannot decide it."""

    service = _service(ctx)
    verdict = service.evaluate_text(text, service.profile(budget=budget))
    _emit(ctx, KIND_VERDICT, verdict, STATUS_PASS if verdict.determined else STATUS_UNDETERMINED)


# ---------------------------------------------------------------------------
# Disjunctions and derivations
# ---------------------------------------------------------------------------

@main.group("disj", cls=LabGroup)
def disj_group() -> None:
    """Disjunction builders."""


@disj_group.command("build")
@click.option("--kind", type=click.Choice(BUILDER_KINDS), default="left", show_default=True)
@click.option("--input", "input_path", type=click.Path(dir_okay=False), required=True, help="JSON list of sentences.")
@click.option("--evaluate", "with_evaluation", is_flag=True, help="Also evaluate the built sentence.")
@click.option("--choice", default="min-code", show_default=True, help="Choice function of the selective builder.")
@budget_option
@click.pass_context
def disj_build(
    ctx: click.Context,
    kind: str,
    input_path: str,
    with_evaluation: bool,
    choice: str,
    budget: Optional[int],
) -> None:
    """Build one sentence from the sentences in INPUT."""

    service = _service(ctx)
    phis = service.load_sentences(input_path)
    payload = service.build_disjunction(kind, phis, service.profile(budget=budget), with_evaluation, choice)
    _emit(ctx, KIND_DISJUNCTION, payload)


@main.group("yablo", cls=LabGroup)
def yablo_group() -> None:
    """Psi-sequence replays."""


@yablo_group.command("run")
@click.option("--length", type=click.IntRange(min=1), default=20, show_default=True)
@click.option("--seq", "seq_path", type=click.Path(dir_okay=False), default=None, help="JSON list of sentences.")
@click.option("--kind", type=click.Choice(BUILDER_KINDS), default="left", show_default=True)
@budget_option
@seed_option
@click.pass_context
def yablo_run(
    ctx: click.Context,
    length: int,
    seq_path: Optional[str],
    kind: str,
    budget: Optional[int],
    seed: Optional[int],
) -> None:
    """Check that every psi_j is true for a sequence meeting the hypotheses."""

    service = _service(ctx)
    profile = service.profile(budget=budget, seed=seed)
    phis = service.load_sentences(seq_path) if seq_path else None
    report = service.run_yablo(profile, length, phis, kind)
    _emit(ctx, KIND_YABLO, report, report.verdict)


# ---------------------------------------------------------------------------
# Principle checks
# ---------------------------------------------------------------------------

@main.command("check")
@click.option("--principle", type=click.Choice(PRINCIPLES), required=True)
@click.option("--input", "input_path", type=click.Path(dir_okay=False), required=True)
@budget_option
@variant_option
@click.pass_context
def check_command(
    ctx: click.Context,
    principle: str,
    input_path: str,
    budget: Optional[int],
    variant: Optional[str],
) -> None:
    """Check one truth principle on the valuation or sequences in INPUT."""

    service = _service(ctx)
    profile = service.profile(budget=budget, variant=variant)
    report = service.check_principle(principle, service.load_check_input(input_path), profile)
    kind = KIND_PROOF if isinstance(report, ProofReport) else KIND_PRINCIPLE
    _emit(ctx, kind, report, report.verdict)


# ---------------------------------------------------------------------------
# Satisfaction classes and cut models
# ---------------------------------------------------------------------------

@main.group("ev", cls=LabGroup)
def ev_group() -> None:
    """Satisfaction-class construction."""


@ev_group.command("run")
@click.argument("scenario", type=click.Path(dir_okay=False))
@click.option("--audit", type=click.Choice(AUDIT_LEVELS), default="full", show_default=True)
@click.option("--pairs", "include_pairs", is_flag=True, help="Include the constructed pairs.")
@click.option("--save", "save_name", default=None, help="Also write the report under the reports directory.")
@long_cut_option
@click.pass_context
def ev_run(
    ctx: click.Context,
    scenario: str,
    audit: str,
    include_pairs: bool,
    save_name: Optional[str],
    long_cut: Optional[int],
) -> None:
    """Run the stage construction on SCENARIO and audit the result."""

    service = _service(ctx)
    report = service.run_scenario(service.load_scenario(scenario), long_cut=long_cut, include_pairs=include_pairs)
    if audit == "summary":
        for entry in report.audits:
            entry.details = []
    _save(ctx, choice_value(save_name), KIND_EV, report)
    _emit(ctx, KIND_EV, report, STATUS_PASS if report.passed else STATUS_FAIL)


@main.group("cutmodel", cls=LabGroup)
def cutmodel_group() -> None:
    """Approximation constructions on finite cut models."""


@cutmodel_group.command("run")
@click.option("--which", type=click.Choice(["A", "B"]), required=True)
@click.option("--size", type=click.IntRange(min=1), default=None)
@click.option("--cut", type=click.IntRange(min=0), default=None)
@click.option("--seqs", "seqs_path", type=click.Path(dir_okay=False), default=None, help="Cut model or list of sequences.")
@click.option("--threshold", type=click.IntRange(min=1), default=None, help="Distinct values counted as long.")
@click.option("--save", "save_name", default=None, help="Also write the run under the reports directory.")
@seed_option
@click.pass_context
def cutmodel_run(
    ctx: click.Context,
    which: str,
    size: Optional[int],
    cut: Optional[int],
    seqs_path: Optional[str],
    threshold: Optional[int],
    save_name: Optional[str],
    seed: Optional[int],
) -> None:
    """Run construction WHICH and audit its trace."""

    service = _service(ctx)
    profile = service.profile(seed=seed)
    if seqs_path:
        model = service.load_cut_model(
            seqs_path,
            size if size is not None else profile.cutmodel.size,
            cut if cut is not None else profile.cutmodel.cut,
            threshold,
        )
    else:
        model = service.random_cut_model(profile, size=size, cut=cut)
        if threshold is not None:
            model.long_threshold = threshold
    run = service.run_cut_model(which, model, profile)
    _save(ctx, choice_value(save_name), KIND_CUTMODEL, run)
    _emit(ctx, KIND_CUTMODEL, run, run.audit.verdict)


# ---------------------------------------------------------------------------
# Suite
# ---------------------------------------------------------------------------

@main.command("suite")
@click.option("--only", default=None, help="Comma-separated check id prefixes.")
@click.option("--output", type=click.Path(dir_okay=False), default=None, help="Also write the report here.")
@seed_option
@budget_option
@long_cut_option
@variant_option
@click.pass_context
def suite_command(
    ctx: click.Context,
    only: Optional[str],
    output: Optional[str],
    seed: Optional[int],
    budget: Optional[int],
    long_cut: Optional[int],
    variant: Optional[str],
) -> None:
    """Run the acceptance checks and print one report."""

    service = _service(ctx)
    profile = service.profile(seed=seed, budget=budget, long_cut=long_cut, variant=variant)
    report = service.run_suite(profile, choice_value(only))
    if output:
        service.store.write_json(Path(output), envelope(KIND_SUITE, report))
    _emit(ctx, KIND_SUITE, report, report.status)


if __name__ == "__main__":
    main()
