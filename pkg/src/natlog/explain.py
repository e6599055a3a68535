"""Structured explanations derived from a closed tableau.

Four formats, ordered by richness:

    lexrel     the set of phrase relations the proof consulted
    rules      a rule-name multiset plus the relation set
    unlabeled  the pruned proof tree with surface-form nodes, no rule labels
    full       the pruned proof tree with rule labels and antecedent links

Pruning keeps exactly the entries that support a branch closure (closure
antecedents and their derivational ancestors through the rule log) and drops
formatting-only steps; branch structure and closures are preserved.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .rules import STRUCTURAL_RULES
from .tableau import Tableau
from .terms import render_surface


class OpenTableauError(Exception):
    """Only closed tableaux carry explanations."""


@dataclass(frozen=True, order=True)
class ExplanationRelation:
    rel: str  # "sub" or "alt"
    lhs: str
    rhs: str
    lhs_text: str = ""
    rhs_text: str = ""
    voices: tuple | None = None

    def jsonable(self):
        return {
            "rel": self.rel,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "lhsText": self.lhs_text,
            "rhsText": self.rhs_text,
            "voices": list(self.voices) if self.voices else None,
        }


@dataclass
class RuleMultisetExplanation:
    rules: dict
    lexrels: tuple

    def jsonable(self):
        return {
            "rules": dict(sorted(self.rules.items())),
            "lexrels": [r.jsonable() for r in self.lexrels],
        }


@dataclass
class ProofNode:
    """One pruned segment: a run of entries plus child branches."""

    entries: list  # of pruned entry descriptors (dicts)
    children: list = field(default_factory=list)
    closure: dict | None = None  # {"rule", "antecedents"} at closed leaves

    def jsonable(self, labeled: bool):
        if labeled:
            ent = [dict(e) for e in self.entries]
        else:
            ent = [[e["text"], e["sign"]] for e in self.entries]
        node = {"entries": ent, "children": [c.jsonable(labeled) for c in self.children]}
        if labeled:
            node["closure"] = self.closure
        else:
            node["closed"] = self.closure is not None
        return node


@dataclass
class TreeExplanation:
    root: ProofNode
    labeled: bool

    def jsonable(self):
        return {"labeled": self.labeled, "tree": self.root.jsonable(self.labeled)}


@dataclass
class PrunedProof:
    tableau: Tableau
    kept: set
    alias: dict  # entry id -> id it was merged into (formatting steps)
    root: ProofNode
    branch_count: int


# -- pruning -------------------------------------------------------------------


def prune(tab: Tableau) -> PrunedProof:
    if not tab.is_closed():
        raise OpenTableauError("cannot explain an open tableau")
    alias = _format_aliases(tab)

    def resolve(eid):
        while eid in alias:
            eid = alias[eid]
        return eid

    kept: set = set()
    frontier = []
    for rec in tab.closures.values():
        frontier.extend(resolve(a) for a in rec.antecedents)
    while frontier:
        eid = frontier.pop()
        if eid in kept:
            continue
        kept.add(eid)
        app_id = tab.entries[eid].produced_by
        if app_id is not None:
            frontier.extend(resolve(a) for a in tab.apps[app_id].antecedents)

    root, branches = _build_tree(tab, kept, resolve)
    return PrunedProof(tab, kept, alias, root, branches)


def _format_aliases(tab: Tableau):
    """Entries produced by formatting-only rules stand for their antecedent."""
    alias = {}
    for app in tab.apps.values():
        if app.rule in STRUCTURAL_RULES and len(app.antecedents) == 1:
            for eid in app.produced_entries:
                alias[eid] = app.antecedents[0]
    return alias


def _build_tree(tab: Tableau, kept, resolve):
    branch_count = 0

    def build(seg_id):
        nonlocal branch_count
        seg = tab.segments[seg_id]
        entries = []
        for eid in seg.entries:
            if eid in kept and resolve(eid) == eid:
                e = tab.entries[eid]
                app = tab.apps[e.produced_by] if e.produced_by is not None else None
                entries.append({
                    "id": eid,
                    "text": tab.render_entry(e),
                    "sign": e.sign,
                    "rule": app.rule if app else None,
                    "antecedents": [resolve(a) for a in app.antecedents] if app else [],
                })
        children = [build(c) for c in seg.children]
        children = [c for c in children if c is not None]
        closure = None
        if seg_id in tab.closures:
            rec = tab.closures[seg_id]
            closure = {"rule": rec.rule,
                       "antecedents": sorted(resolve(a) for a in rec.antecedents)}
            branch_count += 1
        node = ProofNode(entries, children, closure)
        # Splice out segments that pruning emptied, keeping leaves (they
        # carry the branch closure marks).
        if not entries and closure is None and len(children) == 1:
            return children[0]
        return node

    return build(0), branch_count


# -- extraction ----------------------------------------------------------------


def extract_lexrels(tab: Tableau) -> tuple:
    """Relations consulted by branch closures, in deterministic order.

    Closures survive pruning unchanged, so the pruned and unpruned relation
    sets coincide."""
    if not tab.is_closed():
        raise OpenTableauError("cannot explain an open tableau")
    rels = set()
    for rec in tab.closures.values():
        if rec.relation is None:
            continue
        r = rec.relation
        rels.add(ExplanationRelation(
            r.rel, r.lhs, r.rhs,
            render_surface(r.lhs_pieces, tab.texts),
            render_surface(r.rhs_pieces, tab.texts),
            r.voices,
        ))
    return tuple(sorted(rels))


def extract_rules(tab: Tableau) -> RuleMultisetExplanation:
    """Multiset of semantically contributing rules plus the relation set."""
    pruned = prune(tab)
    counts: Counter = Counter()
    for app in tab.apps.values():
        if app.rule in STRUCTURAL_RULES:
            continue
        if any(eid in pruned.kept for eid in app.produced_entries):
            counts[app.rule] += 1
    return RuleMultisetExplanation(dict(counts), extract_lexrels(tab))


def extract_unlabeled(tab: Tableau) -> TreeExplanation:
    pruned = prune(tab)
    root = _strip(pruned.root)
    _sort_children(root, labeled=False)
    return TreeExplanation(root, labeled=False)


def extract_full(tab: Tableau) -> TreeExplanation:
    pruned = prune(tab)
    root = _copy(pruned.root)
    _sort_children(root, labeled=True)
    _renumber(root)
    return TreeExplanation(root, labeled=True)


def _strip(node: ProofNode) -> ProofNode:
    entries = [{"text": e["text"], "sign": e["sign"]} for e in node.entries]
    return ProofNode(entries, [_strip(c) for c in node.children], node.closure)


def _copy(node: ProofNode) -> ProofNode:
    return ProofNode([dict(e) for e in node.entries],
                     [_copy(c) for c in node.children],
                     dict(node.closure) if node.closure else None)


def _sort_children(node: ProofNode, labeled: bool):
    for c in node.children:
        _sort_children(c, labeled)
    node.children.sort(key=lambda c: _content_key(c))


def _content_key(node: ProofNode):
    own = tuple((e["text"], e["sign"]) for e in node.entries)
    return (own, tuple(_content_key(c) for c in node.children))


def _renumber(root: ProofNode):
    """Canonical ids: depth-first over the sorted tree."""
    mapping = {}
    counter = [0]

    def number(node):
        for e in node.entries:
            counter[0] += 1
            mapping[e["id"]] = counter[0]
            e["id"] = counter[0]
        for c in node.children:
            number(c)

    def remap(node):
        for e in node.entries:
            e["antecedents"] = [mapping[a] for a in e["antecedents"]]
        if node.closure:
            node.closure["antecedents"] = sorted(
                mapping[a] for a in node.closure["antecedents"])
        for c in node.children:
            remap(c)

    number(root)
    remap(root)


def verify_full_proof(payload: dict) -> bool:
    """Referential sanity of a serialized full proof: ids are dense, every
    antecedent points at an earlier node on the same branch, and every leaf
    carries a closure."""
    seen_ids: list = []

    def walk(node, above):
        here = list(above)
        for e in node["entries"]:
            seen_ids.append(e["id"])
            if e["rule"] is None and e["antecedents"]:
                return False
            if any(a not in here for a in e["antecedents"]):
                return False
            here.append(e["id"])
        closure = node.get("closure")
        if closure is not None and any(a not in here for a in closure["antecedents"]):
            return False
        if closure is None and not node["children"]:
            return False
        return all(walk(c, here) for c in node["children"])

    ok = walk(payload["tree"], [])
    return ok and sorted(seen_ids) == list(range(1, len(seen_ids) + 1))
