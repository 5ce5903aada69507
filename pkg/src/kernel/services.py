"""High level lab operations built on top of the data store."""

from __future__ import annotations

import json
import logging
from dataclasses import replace
from pathlib import Path
from typing import Any, Optional, Sequence

from ..models import (
    CheckInput,
    CutModel,
    CutModelRun,
    EVReport,
    PrincipleReport,
    ProofFile,
    ProofReport,
    ScenarioFile,
    SuiteReport,
    Verdict,
    YabloReport,
)
from .budgets import LabProfile, load_lab_profile
from .coding import code_text, decode, encode
from .countermodels import audit_construction, construct_A, construct_B
from .derivations import PropProof, check_proof, check_yablo_claim, yablo_transform
from .disjunctions import builder
from .errors import ConstructionAuditError, LabError, MalformedJustification, NotACodeError
from .ev_engine import EVScenario, ev_construct
from .generators import decidable_pool, random_cut_model, yablo_ready
from .principles import (
    Numbering,
    TruthValuation,
    check_ct_minus,
    check_dc,
    check_int,
    check_outer_contract,
    check_qfc,
    check_seqind,
    check_seqoind,
    code_sequences,
    evaluated_valuation,
    truth_set,
)
from .repository import DataStore
from .semantics import DEFAULT_BUDGET, Evaluator, TruthOracle, evaluate, val
from .suite import run_suite
from .syntax import Formula, Term, dag_size, flat_size, is_sentence, parse, parse_term, to_json, to_text
from .utils import parse_many, seeded_rng

logger = logging.getLogger(__name__)

_DC_DIRECTIONS = {"dc": "both", "dcin": "in", "dcout": "out"}


class LabService:
    """Encapsulates the lab operations and their configuration."""

    def __init__(self, store: DataStore | None = None):
        self.store = store or DataStore()
        self._config_cache: dict | None = None
        self._config_cache_key: tuple[str, int | None] | None = None
        self._config_path: Path | None = None
        self._config_default_base = self.store.base_dir
        self._profile_cache: LabProfile | None = None

    def set_config_path(self, path: Path | str | None) -> None:
        self._config_path = Path(path).expanduser().resolve() if path is not None else None
        self._config_cache = None
        self._config_cache_key = None

    def _load_config(self) -> dict:
        candidates: list[Path] = []
        if self._config_path is not None:
            candidates.append(self._config_path)

        default_path = (self._config_default_base / "config.json").resolve()
        if default_path not in candidates:
            candidates.append(default_path)

        current_path = (self.store.base_dir / "config.json").resolve()
        if current_path not in candidates:
            candidates.append(current_path)

        path = candidates[0]
        mtime: int | None = None
        for candidate in candidates:
            try:
                current_mtime = candidate.stat().st_mtime_ns
            except FileNotFoundError:
                continue

            path = candidate
            mtime = current_mtime
            break

        cache_key = (str(path), mtime)

        if self._config_cache is not None and self._config_cache_key == cache_key:
            return self._config_cache

        if mtime is None:
            data = {}
        else:
            try:
                with path.open("r", encoding="utf-8") as handle:
                    data = json.load(handle)
            except (FileNotFoundError, json.JSONDecodeError):
                logger.warning("[config] could not read %s, using defaults", path)
                data = {}

        if not isinstance(data, dict):
            data = {}

        paths_cfg = data.get("paths")
        self.store.configure_paths(paths_cfg if isinstance(paths_cfg, dict) else None)
        logger.debug("[config] loaded %s, reports in %s", path if mtime is not None else "defaults", self.store.reports_dir)

        self._config_cache = data
        self._config_cache_key = cache_key
        self._profile_cache = None
        return self._config_cache

    def get_config(self) -> dict:
        return self._load_config()

    @property
    def config(self) -> dict:
        return self._load_config()

    def get_profile(self) -> LabProfile:
        config = self._load_config()
        if self._profile_cache is None:
            lab_cfg = config.get("lab")
            self._profile_cache = load_lab_profile(lab_cfg if isinstance(lab_cfg, dict) else None)
        return self._profile_cache

    def profile(self, **overrides: Any) -> LabProfile:
        """The configured profile with command-line overrides applied."""

        return self.get_profile().with_overrides(**overrides)

    # ------------------------------------------------------------------
    # Inputs
    # ------------------------------------------------------------------
    def load_check_input(self, path: Path | str) -> CheckInput:
        return CheckInput.model_validate(self.store.load_cached(path))

    def load_scenario(self, path: Path | str) -> ScenarioFile:
        return ScenarioFile.model_validate(self.store.load_cached(path))

    def load_sentences(self, path: Path | str) -> list[Formula]:
        raw = self.store.load_cached(path)
        if not isinstance(raw, list) or not all(isinstance(item, str) for item in raw):
            raise LabError(f"{path} must hold a JSON list of formula strings")
        return parse_many(raw)

    def load_cut_model(self, path: Path | str, size: int, cut: int, threshold: Optional[int] = None) -> CutModel:
        """A cut model file, or a plain list of sequences placed in [0, size)."""

        raw = self.store.load_cached(path)
        if isinstance(raw, dict):
            return CutModel.model_validate(raw)
        return CutModel(size=size, cut=cut, sequences=raw, long_threshold=threshold)

    # ------------------------------------------------------------------
    # Syntax
    # ------------------------------------------------------------------
    def describe(self, text: str, term: bool = False) -> dict:
        node = parse_term(text) if term else parse(text)
        result: dict[str, Any] = {
            "formula": to_text(node),
            "ast": to_json(node),
            "free": sorted(node.free),
            "size": flat_size(node),
            "dag_size": dag_size(node),
        }
        if isinstance(node, Term):
            if not node.free:
                result["value"] = val(node)
        else:
            result["sentence"] = is_sentence(node)
        return result

    def encode_text(self, text: str, term: bool = False) -> dict:
        node = parse_term(text) if term else parse(text)
        return {"formula": to_text(node), "code": code_text(encode(node))}

    def decode_text(self, code: str) -> dict:
        try:
            number = int(code.strip())
        except ValueError as exc:
            raise NotACodeError(f"{code!r} is not a natural number") from exc
        node = decode(number)
        return {"formula": to_text(node), "code": code_text(number), "ast": to_json(node)}

    def evaluate_text(self, text: str, profile: LabProfile) -> Verdict:
        return evaluate(parse(text), profile.evaluation.budget)

    # ------------------------------------------------------------------
    # Disjunctions and derivations
    # ------------------------------------------------------------------
    def build_disjunction(
        self,
        kind: str,
        phis: Sequence[Formula],
        profile: LabProfile,
        with_evaluation: bool = False,
        choice: str = "min-code",
    ) -> dict:
        made = builder(kind, choice)
        whole = made(phis)
        result: dict[str, Any] = {
            "builder": made.name,
            "length": len(phis),
            "formula": to_text(whole),
            "dag_size": dag_size(whole),
        }
        if with_evaluation:
            result["evaluation"] = evaluate(whole, profile.evaluation.budget).model_dump(mode="json")
        return result

    def run_yablo(
        self,
        profile: LabProfile,
        length: int,
        phis: Optional[Sequence[Formula]] = None,
        kind: str = "left",
    ) -> YabloReport:
        if phis is None:
            rng = seeded_rng(profile.seed, "yablo")
            engine = Evaluator(DEFAULT_BUDGET)
            phis = yablo_ready(rng, decidable_pool(rng, 6, engine), length, engine)
        ys = yablo_transform(phis, builder(kind))
        return check_yablo_claim(ys, profile.evaluation.budget)

    # ------------------------------------------------------------------
    # Principle checks
    # ------------------------------------------------------------------
    def _valuation(self, data: CheckInput, profile: LabProfile) -> TruthValuation:
        entries = {parse(entry.sentence): entry.value for entry in data.valuation}
        if not data.evaluate_closure:
            return TruthValuation(entries)
        sentences = parse_many(data.sentences)
        for seq in data.sequences:
            phis = parse_many(seq)
            sentences.extend(phis)
            if phis:
                sentences.append(builder("left")(phis))
        evaluated = evaluated_valuation(sentences, profile.evaluation.closure_budget, profile.variant)  # type: ignore[arg-type]
        values = dict(evaluated)
        values.update(entries)
        return TruthValuation(values)

    def _oracle(self, data: CheckInput, profile: LabProfile) -> TruthOracle:
        if data.valuation or data.evaluate_closure:
            return self._valuation(data, profile)
        return Evaluator(profile.evaluation.budget)

    def check_principle(self, principle: str, data: CheckInput, profile: LabProfile) -> PrincipleReport | ProofReport:
        closure_budget = profile.evaluation.closure_budget
        if principle == "ctminus":
            return check_ct_minus(self._valuation(data, profile), profile.variant, closure_budget)  # type: ignore[arg-type]
        if principle in _DC_DIRECTIONS:
            seqs = [parse_many(seq) for seq in data.sequences]
            return check_dc(self._valuation(data, profile), seqs, _DC_DIRECTIONS[principle])  # type: ignore[arg-type]
        if principle in ("seqind", "seqoind"):
            check = check_seqind if principle == "seqind" else check_seqoind
            if data.truth_set or data.number_sequences:
                return check(set(data.truth_set), data.number_sequences)
            numbering = Numbering()
            v = self._valuation(data, profile)
            seqs = code_sequences([parse_many(seq) for seq in data.sequences], numbering)
            return check(truth_set(v, numbering), seqs)
        if principle == "int":
            if data.formula is None:
                raise LabError("int needs a formula")
            return check_int(self._oracle(data, profile), parse(data.formula), closure_budget)
        if principle == "qfc":
            return check_qfc(self._valuation(data, profile))
        if principle == "outer":
            seqs = [parse_many(seq) for seq in data.sequences]
            return check_outer_contract(builder(data.builder), self._oracle(data, profile), seqs, data.structural)
        if principle == "proof":
            if data.proof is None:
                raise MalformedJustification(0, "no proof given")
            return self.check_proof_file(data.proof, self._oracle(data, profile), profile)
        raise LabError(f"unknown principle {principle!r}")

    def check_proof_file(self, proof: ProofFile, truth: TruthOracle, profile: LabProfile) -> ProofReport:
        return check_proof(PropProof.from_file(proof), truth, profile.evaluation.atom_limit)

    # ------------------------------------------------------------------
    # Satisfaction classes and cut models
    # ------------------------------------------------------------------
    def run_scenario(
        self,
        data: ScenarioFile,
        long_cut: Optional[int] = None,
        include_pairs: bool = False,
    ) -> EVReport:
        """Run the construction; a failed audit still yields its report."""

        if long_cut is not None:
            data = data.model_copy(update={"long_cut": long_cut})
        scenario = EVScenario.from_file(data)
        try:
            _, report = ev_construct(scenario, include_pairs)
        except ConstructionAuditError as exc:
            logger.warning("[ev] %s", exc)
            return exc.report
        return report

    def random_cut_model(self, profile: LabProfile, size: Optional[int] = None, cut: Optional[int] = None) -> CutModel:
        shape = profile.cutmodel
        if size is not None:
            shape = replace(shape, size=size)
        if cut is not None:
            shape = replace(shape, cut=cut)
        return random_cut_model(seeded_rng(profile.seed, "cutmodel"), shape)

    def run_cut_model(self, which: str, model: CutModel, profile: LabProfile) -> CutModelRun:
        if which == "A":
            trace = construct_A(model)
        else:
            trace = construct_B(model, profile.cutmodel.threshold_divisor)
        audit = audit_construction(trace, model, which)  # type: ignore[arg-type]
        return CutModelRun(model=model.model_dump(mode="json", by_alias=True), trace=trace, audit=audit)

    # ------------------------------------------------------------------
    # Suite and reports
    # ------------------------------------------------------------------
    def run_suite(self, profile: LabProfile, only: Optional[str] = None) -> SuiteReport:
        return run_suite(profile, only)

    def save_report(self, name: str, document: dict) -> Path:
        self._load_config()
        path = self.store.save_report(name, document)
        logger.info("[report] wrote %s", path)
        return path
