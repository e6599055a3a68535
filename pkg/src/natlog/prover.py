"""Three-way inference classification by dual refutation searches.

Entailment is proved by failing to build a situation where the premises are
true and the hypothesis false; contradiction by failing to build one where
premises and hypothesis are all true.  Whatever survives both searches is
neutral and carries no proof.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .engine import BUDGET, Budget, SaturationResult, saturate
from .grammar import parse
from .lexicon import KnowledgeBase
from .tableau import F, T, init_tableau

ENTAILMENT = "entailment"
CONTRADICTION = "contradiction"
NEUTRAL = "neutral"


@dataclass(frozen=True)
class NLIProblem:
    id: str
    premises: tuple
    hypothesis: str
    gold: str | None = None

    def __post_init__(self):
        if not self.premises or not all(self.premises) or not self.hypothesis:
            raise ValueError("premises and hypothesis must be non-empty")


@dataclass
class ProofResult:
    label: str
    searched: str | None = None  # relation the proof refutation targeted
    proof: SaturationResult | None = None
    flags: dict = field(default_factory=dict)
    millis: float = 0.0
    entries: int = 0

    @property
    def tableau(self):
        return self.proof.tableau if self.proof is not None else None


def parse_problem(problem: NLIProblem):
    """Premises become S1..Sk, the hypothesis S(k+1)."""
    sentences = [parse(p, i + 1) for i, p in enumerate(problem.premises)]
    hypothesis = parse(problem.hypothesis, len(problem.premises) + 1)
    return sentences, hypothesis


def classify(problem: NLIProblem, kb: KnowledgeBase, budget: Budget = Budget()) -> ProofResult:
    start = time.perf_counter()
    premises, hypothesis = parse_problem(problem)

    def search(h_sign):
        roots = [(p, T) for p in premises] + [(hypothesis, h_sign)]
        return saturate(init_tableau(roots), kb, budget)

    entailment_run = search(F)
    contradiction_run = search(T)
    flags = {
        "unsatisfiablePremise": entailment_run.closed and contradiction_run.closed,
        "budgetExhausted": False,
    }
    millis = (time.perf_counter() - start) * 1e3
    if entailment_run.closed:
        # Both searches closing means no model satisfies the premises at all.
        return ProofResult(ENTAILMENT, ENTAILMENT, entailment_run, flags, millis,
                           len(entailment_run.tableau.entries))
    if contradiction_run.closed:
        return ProofResult(CONTRADICTION, CONTRADICTION, contradiction_run, flags, millis,
                           len(contradiction_run.tableau.entries))
    flags["budgetExhausted"] = BUDGET in (entailment_run.status, contradiction_run.status)
    total = len(entailment_run.tableau.entries) + len(contradiction_run.tableau.entries)
    return ProofResult(NEUTRAL, None, None, flags, millis, total)
