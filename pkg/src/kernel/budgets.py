"""Centralised budget configuration for evaluation, constructions and the suite."""

from __future__ import annotations

from dataclasses import dataclass, field, fields, is_dataclass, replace
from typing import Any, Mapping, Sequence


@dataclass(frozen=True)
class EvaluationBudget:
    """Search bounds of the evaluator and the tautology checker."""

    budget: int = 64
    atom_limit: int = 20
    closure_budget: int = 8


@dataclass(frozen=True)
class EVBudget:
    """Size limits of satisfaction-class scenarios."""

    universe: int = 3
    long_cut: int = 4
    long_cut_range: tuple[int, int] = (3, 8)
    max_environment: int = 60
    max_classes: int = 12


@dataclass(frozen=True)
class CutModelBudget:
    """Shape of randomized cut models."""

    size: int = 2000
    cut: int = 1000
    sequences: int = 300
    max_length: int = 50
    threshold_divisor: int = 10
    suite_threshold: int = 16


@dataclass(frozen=True)
class SuiteBudget:
    """Sample counts of the acceptance checks."""

    coding_samples: int = 10_000
    coding_depth: int = 8
    oracle_samples: int = 1000
    oracle_bound: int = 8
    dc_samples: int = 200
    dc_max_length: int = 32
    yablo_samples: int = 200
    yablo_max_length: int = 64
    yablo_flat_length: int = 20
    outer_samples: int = 200
    outer_max_length: int = 12
    tautology_max_length: int = 10
    ev_samples: int = 100
    cutmodel_samples: int = 100
    injections: int = 50
    proof_samples: int = 200
    proof_max_lines: int = 12


@dataclass(frozen=True)
class LabProfile:
    """Bundle of all tunable parameters."""

    seed: int = 7
    variant: str = "numeral"
    evaluation: EvaluationBudget = field(default_factory=EvaluationBudget)
    ev: EVBudget = field(default_factory=EVBudget)
    cutmodel: CutModelBudget = field(default_factory=CutModelBudget)
    suite: SuiteBudget = field(default_factory=SuiteBudget)

    def with_overrides(
        self,
        *,
        budget: int | None = None,
        long_cut: int | None = None,
        seed: int | None = None,
        variant: str | None = None,
    ) -> "LabProfile":
        """Apply command-line flags; ``None`` keeps the configured value."""

        profile = self
        if budget is not None:
            profile = replace(profile, evaluation=replace(profile.evaluation, budget=budget))
        if long_cut is not None:
            profile = replace(profile, ev=replace(profile.ev, long_cut=long_cut))
        if seed is not None:
            profile = replace(profile, seed=seed)
        if variant is not None:
            profile = replace(profile, variant=variant)
        return profile


def _coerce_scalar(template: Any, raw: Any) -> Any:
    """Attempt to coerce ``raw`` into the type of ``template``."""

    if isinstance(template, bool):
        return raw if isinstance(raw, bool) else template
    if isinstance(template, float):
        try:
            return float(raw)
        except (TypeError, ValueError):
            return template
    if isinstance(template, int):
        try:
            return int(raw)
        except (TypeError, ValueError):
            return template
    if isinstance(template, str):
        return raw if isinstance(raw, str) and raw else template
    if isinstance(template, tuple) and len(template) == 2:
        if isinstance(raw, Sequence) and not isinstance(raw, str) and len(raw) == 2:
            return (_coerce_scalar(template[0], raw[0]), _coerce_scalar(template[1], raw[1]))
        return template
    return raw


def _merge_dataclass(instance: Any, overrides: Mapping[str, Any]) -> Any:
    if not is_dataclass(instance) or not isinstance(overrides, Mapping):
        return instance

    updates: dict[str, Any] = {}
    for field_info in fields(instance):
        name = field_info.name
        if name not in overrides:
            continue
        current_value = getattr(instance, name)
        override_value = overrides[name]
        if is_dataclass(current_value):
            updates[name] = _merge_dataclass(current_value, override_value)
        else:
            updates[name] = _coerce_scalar(current_value, override_value)
    if not updates:
        return instance
    return replace(instance, **updates)


def load_lab_profile(raw: Mapping[str, Any] | None) -> LabProfile:
    """Return a :class:`LabProfile` with optional overrides applied."""

    profile = LabProfile()
    if not isinstance(raw, Mapping):
        return profile
    return _merge_dataclass(profile, raw)
