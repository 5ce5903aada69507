"""Cut-surrogate simulations of the two countermodel constructions.

Construction A builds T with SeqOInd but T a proper part of the cut;
construction B builds T with SeqInd by planting an adjacent (in T, not in T)
pair into every long sequence. Both record each step in an ApproxTrace.
"""

from __future__ import annotations

import logging
from typing import Literal, Optional

from ..models import ApproxTrace, CutModel, PrincipleReport, TraceStep
from .errors import DisjointnessError, FreshExhaustedError
from .principles import check_seqind, check_seqoind

logger = logging.getLogger(__name__)


class _FreshPool:
    """Least elements of [0, cut) outside a growing used set."""

    def __init__(self, cut: int):
        self.cut = cut
        self.cursor = 0

    def take(self, used: set[int], avoid: int) -> Optional[int]:
        while self.cursor < self.cut and self.cursor in used:
            self.cursor += 1
        candidate = self.cursor
        while candidate < self.cut and (candidate in used or candidate == avoid):
            candidate += 1
        return candidate if candidate < self.cut else None


def construct_A(m: CutModel) -> ApproxTrace:
    """A_0 = B_0 = {}; each unabsorbed sequence sends a fresh element to A and its first miss to B."""

    a_set: set[int] = set()
    b_set: set[int] = set()
    used: set[int] = set()
    pool = _FreshPool(m.cut)
    trace = ApproxTrace(which="A", cut=m.cut)
    for index, seq in enumerate(m.sequences):
        missing = next((value for value in seq if value not in a_set), None)
        if missing is None:
            trace.steps.append(TraceStep(index=index, branch="keep"))
            continue
        fresh = pool.take(used, avoid=missing)
        if fresh is None:
            raise FreshExhaustedError(index)
        a_set.add(fresh)
        b_set.add(missing)
        used.update((fresh, missing))
        trace.steps.append(TraceStep(index=index, branch="extend", added_a=fresh, added_b=missing))
    trace.final_t = sorted(a_set)
    return trace


def _is_finite(seq: list[int], cut: int, threshold: int) -> bool:
    return not seq or max(seq) < cut or len(set(seq)) < threshold


def _first_case(seq: list[int], a_set: set[int], b_set: set[int], start: int) -> Optional[tuple[int, int]]:
    for j in range(max(start, 0) + 1, len(seq)):
        previous, current = seq[j - 1], seq[j]
        if current not in a_set and previous not in b_set and previous != current:
            return previous, current
    return None


def construct_B(m: CutModel, threshold_divisor: int = 10) -> ApproxTrace:
    """A_0 = [0, cut), B_0 = {}; long sequences get an adjacent (a in A, b in B) pair."""

    threshold = m.effective_threshold(threshold_divisor)
    a_set: set[int] = set(range(m.cut))
    b_set: set[int] = set()
    trace = ApproxTrace(which="B", cut=m.cut, initial_a=sorted(a_set))
    for index, seq in enumerate(m.sequences):
        if _is_finite(seq, m.cut, threshold):
            trace.steps.append(TraceStep(index=index, branch="finite"))
            continue
        in_b = [j for j, value in enumerate(seq) if value in b_set]
        if in_b == list(range(len(in_b))):
            sup = in_b[-1] if in_b else 0
            found = _first_case(seq, a_set, b_set, sup)
            if found is None:
                logger.info("[cutmodel] step %d: no j past %d leaves A, sequence skipped", index, sup)
                trace.steps.append(TraceStep(index=index, branch="skip", note=f"no j > {sup} with a value outside A"))
                continue
            a, b = found
            note = f"initial segment up to {sup}"
        else:
            j = next(j for j in range(len(seq) - 1) if seq[j] not in b_set and seq[j + 1] in b_set)
            a, b = seq[j], seq[j + 1]
            note = f"descent into B at {j + 1}"
        a_set.add(a)
        b_set.add(b)
        overlap = a_set & b_set
        if overlap:
            raise DisjointnessError(index, overlap)
        trace.steps.append(TraceStep(index=index, branch="extend", added_a=a, added_b=b, note=note))
    trace.final_t = sorted(a_set)
    return trace


def _has_adjacent_pair(seq: list[int], truth: set[int]) -> bool:
    return any(seq[j] in truth and seq[j + 1] not in truth for j in range(len(seq) - 1))


def audit_construction(trace: ApproxTrace, m: CutModel, which: Literal["A", "B"]) -> PrincipleReport:
    """Finitely checkable claims about a finished construction."""

    report = PrincipleReport(principle=f"construction-{which}")
    truth = set(trace.final_t)
    a_set, b_set = set(trace.initial_a), set(trace.initial_b)
    for position, step in enumerate(trace.steps):
        report.instances += 1
        before_a, before_b = len(a_set), len(b_set)
        if step.added_a is not None:
            a_set.add(step.added_a)
        if step.added_b is not None:
            b_set.add(step.added_b)
        overlap = a_set & b_set
        if overlap:
            report.violate("disjointness", f"step {position}", f"A and B share {sorted(overlap)[:5]}")
        if which == "A" and step.branch == "extend" and len(a_set) - before_a != 1:
            report.violate("growth", f"step {position}", "an extension must add a fresh element to A")
        if len(b_set) - before_b > 1:
            report.violate("growth", f"step {position}", "B grew by more than one element")

    if truth != a_set:
        report.violate("final", "T", "T differs from the union of the A_i")
    leaked = truth & b_set
    if leaked:
        report.violate("disjointness", "T", f"T contains elements of B: {sorted(leaked)[:5]}")

    if which == "A":
        outside = sorted(x for x in truth if x >= m.cut)
        if outside:
            report.violate("cut", "T", f"T has elements at or above the cut: {outside[:5]}")
        if len(truth) != trace.extensions:
            report.violate("count", "T", f"|T| = {len(truth)} but {trace.extensions} steps extended A")
        report.absorb(check_seqoind(truth, m.sequences))
        return report

    missing_cut = [x for x in range(m.cut) if x not in truth]
    if missing_cut:
        report.violate("cut", "T", f"the cut is not contained in T, missing {missing_cut[:5]}")
    for step in trace.steps:
        if step.branch == "extend" and not _has_adjacent_pair(m.sequences[step.index], truth):
            report.violate("adjacent", f"sequence {step.index}", "no j with s(j) in T and s(j+1) outside T")
    if trace.skips:
        report.notes.append(f"skipped steps: {trace.skips}")
    report.notes.append("SeqOInd failure needs overspill and is not certified at finite scale")
    report.absorb(check_seqind(truth, m.sequences))
    return report
