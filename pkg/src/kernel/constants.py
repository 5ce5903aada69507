"""Shared names for principles, builders, report kinds and suite checks."""

PRINCIPLES = ("ctminus", "dc", "dcin", "dcout", "seqind", "seqoind", "int", "qfc", "outer", "proof")
BUILDER_KINDS = ("left", "balanced", "outer", "negconj", "selective")
VARIANTS = ("numeral", "term")
POLICIES = ("satisfy", "falsify-balanced")
AUDIT_LEVELS = ("full", "summary")

# Envelope kinds of the JSON documents written by the command line.
KIND_PARSE = "parse"
KIND_CODE = "code"
KIND_VERDICT = "verdict"
KIND_DISJUNCTION = "disjunction"
KIND_YABLO = "yablo-report"
KIND_PRINCIPLE = "principle-report"
KIND_PROOF = "proof-report"
KIND_EV = "ev-report"
KIND_CUTMODEL = "cutmodel-run"
KIND_SUITE = "suite-report"

# Acceptance checks in report order.
CHECK_TITLES = {
    "balanced": "the balanced builder breaks the append clause but keeps the biconditional",
    "coding": "decode(encode(x)) == x on random trees",
    "construction-a": "construction A keeps its invariants and SeqOInd on random cut models",
    "construction-b": "construction B keeps its invariants and SeqInd on random cut models",
    "dc": "evaluated disjunctions agree with their disjuncts for every standard builder and the argument replays confirm",
    "determinism": "seeded generators reproduce their output",
    "ev": "random satisfaction-class scenarios pass every audit",
    "examples": "worked examples give their documented values",
    "injection": "injected faults are reported in the expected clause family",
    "oracle": "evaluation agrees with an independent enumerator",
    "proof": "the proof checker accepts exactly the derivations closed under modus ponens",
    "outer": "the quantified outer disjunction meets its contract and the tautology instances hold",
    "yablo": "psi-sequences stay true, shared and exponentially large when flattened",
}
CHECK_IDS = tuple(sorted(CHECK_TITLES))

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
