"""Exception hierarchy for the truth laboratory.

Checkers report violations as data; only broken preconditions raise.
"""

from __future__ import annotations

from typing import Any


class LabError(RuntimeError):
    """Base class for every error raised by the kernel."""


class ParseError(LabError):
    def __init__(self, message: str, *, line: int | None = None, column: int | None = None):
        where = f" at line {line}, column {column}" if line is not None and column is not None else ""
        super().__init__(f"{message}{where}")
        self.line = line
        self.column = column


class UnboundVariableError(LabError):
    def __init__(self, missing: set[int] | frozenset[int]):
        names = ", ".join(f"x{index}" for index in sorted(missing))
        super().__init__(f"assignment does not cover {names}")
        self.missing = frozenset(missing)


class OpenTermError(LabError):
    """A closed term was required."""


class NotACodeError(LabError):
    """The natural number is not the code of any term or formula."""


class NotASentenceError(LabError):
    """A sentence was required but the formula has free variables."""


class EmptySequenceError(LabError):
    """The operation is undefined on the empty sequence."""


class TooShortError(LabError):
    """The sequence is too short to split."""


class InvalidChoiceError(LabError):
    """A choice function picked an element outside its argument."""


class HypothesisViolation(LabError):
    def __init__(self, message: str, *, index: int | None = None):
        super().__init__(message)
        self.index = index


class OracleUndetermined(LabError):
    def __init__(self, sentence: str):
        super().__init__(f"truth oracle is undetermined on {sentence}")
        self.sentence = sentence


class MalformedJustification(LabError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class TooManyAtomsError(LabError):
    def __init__(self, count: int, limit: int):
        super().__init__(f"{count} propositional atoms exceed the limit of {limit}")
        self.count = count
        self.limit = limit


class ClosureMissError(LabError):
    def __init__(self, sentence: str):
        super().__init__(f"sentence missing from the valuation closure: {sentence}")
        self.sentence = sentence


class MultiVariableError(LabError):
    """The formula has more than one free variable."""


class ScenarioError(LabError):
    """An EV scenario violates one of its invariants."""


class NotPresatError(LabError):
    def __init__(self, clause: str, detail: str):
        super().__init__(f"not a pre-satisfaction class ({clause}): {detail}")
        self.clause = clause


class ClassCycleError(LabError):
    """The similarity-class order is not acyclic."""


class ConstructionAuditError(LabError):
    def __init__(self, report: Any):
        failed = [audit.name for audit in getattr(report, "audits", []) if audit.status == "fail"]
        super().__init__(f"construction audit failed: {', '.join(failed) or 'unknown'}")
        self.report = report


class FreshExhaustedError(LabError):
    def __init__(self, step: int):
        super().__init__(f"no fresh element below the cut at step {step}")
        self.step = step


class DisjointnessError(LabError):
    def __init__(self, step: int, overlap: set[int]):
        super().__init__(f"A and B intersect at step {step}: {sorted(overlap)[:10]}")
        self.step = step
        self.overlap = overlap
