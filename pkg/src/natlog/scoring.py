"""Automatic scoring of structured explanations against gold.

Relation sets are scored with precision/recall/F1; rule multisets and proof
trees with exact match (after canonical branch ordering), since their nodes
are offset-anchored and admit no harmless paraphrase.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

LEXREL = "lexrel"
RULES = "rules"
UNLABELED = "unlabeled"
FULL = "full"

FORMATS = (LEXREL, RULES, UNLABELED, FULL)


class ScoringError(Exception):
    pass


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f1: float


def _relation_key(rel: dict):
    """Canonical identity of one relation: symmetric relations compare with
    sorted sides; surface strings are whitespace-normalized and casefolded."""

    def norm(s):
        return " ".join(str(s).split()).casefold()

    lhs, rhs = norm(rel["lhs"]), norm(rel["rhs"])
    if rel["rel"] in ("alt", "equ"):
        lhs, rhs = sorted((lhs, rhs))
    voices = tuple(rel["voices"]) if rel.get("voices") else None
    return (rel["rel"], lhs, rhs, voices)


def score_lexrels(gold, sys) -> PRF:
    """Both sides are lists of relation dicts.  Empty gold vs empty system is
    a correct (empty) explanation and scores 1.0."""
    gold_keys = {_relation_key(r) for r in gold}
    sys_keys = {_relation_key(r) for r in sys}
    if not gold_keys and not sys_keys:
        return PRF(1.0, 1.0, 1.0)
    tp = len(gold_keys & sys_keys)
    precision = tp / len(sys_keys) if sys_keys else 1.0
    recall = tp / len(gold_keys) if gold_keys else 1.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return PRF(precision, recall, f1)


def score_rules(gold: dict, sys: dict) -> bool:
    """Exact multiset equality of rule names plus relation-set equality."""
    gold_rules = {k: v for k, v in gold.get("rules", {}).items() if v}
    sys_rules = {k: v for k, v in sys.get("rules", {}).items() if v}
    if gold_rules != sys_rules:
        return False
    gold_rels = {_relation_key(r) for r in gold.get("lexrels", [])}
    sys_rels = {_relation_key(r) for r in sys.get("lexrels", [])}
    return gold_rels == sys_rels


def canonical_tree(node: dict) -> tuple:
    """Order-independent form of an unlabeled proof tree: children sorted by
    their own canonical form."""
    entries = tuple((t, s) for t, s in node["entries"])
    children = tuple(sorted(canonical_tree(c) for c in node["children"]))
    return (entries, children, node.get("closed", False))


def _canonical_full(tree: dict) -> dict:
    """Branch-order-independent form of a labeled proof: children sorted by
    content, node ids renumbered depth-first, antecedents remapped."""

    def content_key(node):
        own = tuple((e["text"], e["sign"], e["rule"]) for e in node["entries"])
        return (own, tuple(content_key(c) for c in node["children"]))

    def rebuild(node):
        out = {
            "entries": [dict(e) for e in node["entries"]],
            "children": sorted((rebuild(c) for c in node["children"]), key=content_key),
            "closure": dict(node["closure"]) if node.get("closure") else None,
        }
        return out

    tree = rebuild(tree)
    mapping = {}
    counter = [0]

    def number(node):
        for e in node["entries"]:
            counter[0] += 1
            mapping[e["id"]] = counter[0]
        for c in node["children"]:
            number(c)

    def remap(node):
        for e in node["entries"]:
            e["id"] = mapping[e["id"]]
            e["antecedents"] = sorted(mapping[a] for a in e["antecedents"])
        if node["closure"]:
            node["closure"]["antecedents"] = sorted(
                mapping[a] for a in node["closure"]["antecedents"])
        for c in node["children"]:
            remap(c)

    number(tree)
    remap(tree)
    return tree


def score_tree(gold: dict, sys: dict, fmt: str) -> bool:
    """Exact equality after canonical branch ordering."""
    if fmt not in (UNLABELED, FULL):
        raise ScoringError(f"not a tree format: {fmt}")
    labeled = fmt == FULL
    for payload in (gold, sys):
        if bool(payload.get("labeled")) != labeled:
            raise ScoringError(f"explanation payload does not match format {fmt!r}")
    if labeled:
        return _canonical_full(gold["tree"]) == _canonical_full(sys["tree"])
    return canonical_tree(gold["tree"]) == canonical_tree(sys["tree"])


@dataclass
class ScoreReport:
    fmt: str
    per_problem: dict = field(default_factory=dict)

    def add(self, problem_id: str, value):
        self.per_problem[problem_id] = value

    def aggregates(self) -> dict:
        ids = sorted(self.per_problem)
        if self.fmt == LEXREL:
            ps = [self.per_problem[i].precision for i in ids]
            rs = [self.per_problem[i].recall for i in ids]
            fs = [self.per_problem[i].f1 for i in ids]
            n = len(ids) or 1
            exact = sum(1 for i in ids if self.per_problem[i].f1 == 1.0)
            return {
                "problems": len(ids),
                "macroPrecision": sum(ps) / n,
                "macroRecall": sum(rs) / n,
                "macroF1": sum(fs) / n,
                "exactMatch": exact / n,
            }
        exact = sum(1 for i in ids if self.per_problem[i])
        return {"problems": len(ids), "exactMatch": exact / (len(ids) or 1)}

    def jsonable(self) -> dict:
        per = {}
        for pid, value in sorted(self.per_problem.items()):
            if isinstance(value, PRF):
                per[pid] = {"precision": value.precision, "recall": value.recall,
                            "f1": value.f1}
            else:
                per[pid] = {"exact": bool(value)}
        return {"format": self.fmt, "perProblem": per, "aggregate": self.aggregates()}

    def to_json(self) -> str:
        return json.dumps(self.jsonable(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def to_table(self) -> str:
        lines = [f"format: {self.fmt}"]
        header = f"{'problem':<24} {'score':>8}"
        lines.append(header)
        lines.append("-" * len(header))
        for pid, value in sorted(self.per_problem.items()):
            if isinstance(value, PRF):
                lines.append(f"{pid:<24} {value.f1:>8.3f}")
            else:
                lines.append(f"{pid:<24} {'yes' if value else 'no':>8}")
        agg = self.aggregates()
        for key, val in sorted(agg.items()):
            shown = f"{val:.3f}" if isinstance(val, float) else str(val)
            lines.append(f"{key:<24} {shown:>8}")
        return "\n".join(lines) + "\n"


def score_pair(fmt: str, gold: dict, sys: dict):
    """Score one problem's explanation payloads in the given format."""
    if fmt == LEXREL:
        return score_lexrels(gold.get("lexrels", []), sys.get("lexrels", []))
    if fmt == RULES:
        return score_rules(gold, sys)
    if fmt in (UNLABELED, FULL):
        return score_tree(gold, sys, fmt)
    raise ScoringError(f"unknown format {fmt!r}")
