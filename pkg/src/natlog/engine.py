"""Saturation loop: grow the tableau branch by branch until every branch is
closed, no rule applies, or the search budget runs out.

Branches are processed leftmost-first and each branch is driven to a verdict
before the next one starts.  After every change the branch is re-checked for
closure, so rules never fire on a branch that is already inconsistent.  The
whole procedure is deterministic: candidates are totally ordered and budgets
are hard bounds.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .lexicon import KnowledgeBase
from .rules import enumerate_candidates
from .tableau import Tableau, check_closure

CLOSED = "closed"
OPEN = "open"
BUDGET = "budget"


@dataclass(frozen=True)
class Budget:
    max_entries: int = 500
    max_fresh_entities: int = 4
    max_rule_applications: int = 2000

    def __post_init__(self):
        if min(self.max_entries, self.max_fresh_entities, self.max_rule_applications) < 1:
            raise ValueError("all budget components must be >= 1")


@dataclass
class SaturationResult:
    status: str
    tableau: Tableau
    rule_applications: int
    millis: float

    @property
    def closed(self) -> bool:
        return self.status == CLOSED


def saturate(tab: Tableau, kb: KnowledgeBase, budget: Budget = Budget()) -> SaturationResult:
    start = time.perf_counter()

    def done(status):
        return SaturationResult(status, tab, len(tab.apps), (time.perf_counter() - start) * 1e3)

    while True:
        open_leaves = tab.open_leaves()
        if not open_leaves:
            return done(CLOSED)
        leaf = open_leaves[0]
        record = check_closure(tab, leaf, kb)
        if record is not None:
            tab.close(record)
            continue
        fired = tab.fired_keys(leaf)
        chosen = None
        fresh_blocked = False
        for cand in enumerate_candidates(tab, leaf, kb):
            if cand.dedup_key() in fired:
                continue
            if cand.needs_fresh and tab.entity_count >= budget.max_fresh_entities:
                fresh_blocked = True  # recorded: rule was applicable but out of witnesses
                continue
            chosen = cand
            break
        if chosen is None:
            # A permanently open branch means the refutation fails; there is
            # no point expanding the remaining branches.
            return done(BUDGET if fresh_blocked else OPEN)
        if len(tab.apps) + 1 > budget.max_rule_applications:
            return done(BUDGET)
        produced = sum(len(seg) for seg in chosen.segments)
        if len(tab.entries) + produced > budget.max_entries:
            return done(BUDGET)
        _apply(tab, leaf, chosen)


def _apply(tab: Tableau, leaf: int, cand):
    entity = tab.fresh_entity() if cand.needs_fresh else None
    app = tab.add_application(cand.rule, cand.antecedents, leaf, witness=cand.witness)
    seg_ids = []
    entry_ids = []
    for s_idx, seg_spec in enumerate(cand.segments):
        sid = tab.add_segment(leaf)
        seg_ids.append(sid)
        for e_idx, (term, args, sign) in enumerate(seg_spec):
            if (s_idx, e_idx) in cand.fresh_slots:
                args = (entity,)
            entry = tab.add_entry(sid, term, args or (), sign, produced_by=app.id)
            entry_ids.append(entry.id)
    app.produced_segments = tuple(seg_ids)
    app.produced_entries = tuple(entry_ids)
    if entity is not None:
        app.entity = entity.name
