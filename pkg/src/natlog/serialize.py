"""File formats: proof JSON, corpus JSONL, explanation payloads.

Proof files are fully structural: every node carries its term, its surface
pieces in machine form (offset notation) and the rendered human string, and
the rule log is complete, so a proof can be reloaded and re-explained
without re-running the search.  All JSON is dumped with sorted keys so that
identical runs produce byte-identical files.
"""

from __future__ import annotations

import json
import os
from importlib import resources

from .prover import NLIProblem
from .tableau import ClosureRecord, RelationUse, Tableau
from .terms import Application, Constant, Entity, FunType, Slice


class FormatError(Exception):
    pass


DEFAULT_KB_RESOURCE = "default.tsv"
KB_ENV_VAR = "NATLOG_KB"


def packaged_data_path(name: str) -> str:
    return str(resources.files("natlog").joinpath("data").joinpath(name))


def resolve_kb_path(cli_value: str | None) -> str:
    if cli_value:
        return cli_value
    env = os.environ.get(KB_ENV_VAR)
    if env:
        return env
    return packaged_data_path(DEFAULT_KB_RESOURCE)


def dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def dumps_line(payload) -> str:
    return json.dumps(payload, sort_keys=True, ensure_ascii=False) + "\n"


# -- terms ---------------------------------------------------------------------


def type_to_json(t):
    if isinstance(t, FunType):
        return {"args": [type_to_json(a) for a in t.args], "result": t.result}
    return t


def type_from_json(payload):
    if isinstance(payload, dict):
        return FunType(tuple(type_from_json(a) for a in payload["args"]), payload["result"])
    return payload


def pieces_to_json(pieces):
    out = []
    for p in pieces:
        if isinstance(p, Slice):
            out.append({"sent": p.sent, "start": p.start, "end": p.end})
        else:
            out.append({"text": p})
    return out


def pieces_from_json(payload):
    out = []
    for p in payload:
        if "text" in p:
            out.append(p["text"])
        else:
            out.append(Slice(p["sent"], p["start"], p["end"]))
    return tuple(out)


def compact_pieces(pieces) -> str:
    return "".join(str(p) for p in pieces)


def term_to_json(t):
    if isinstance(t, Constant):
        out = {
            "k": "const",
            "lemma": t.lemma,
            "type": type_to_json(t.type),
            "voice": t.voice,
        }
        if t.anchor is not None:
            out["anchor"] = {"sent": t.anchor.sent, "start": t.anchor.start, "end": t.anchor.end}
        if t.oblique:
            out["oblique"] = True
        return out
    if isinstance(t, Entity):
        return {"k": "ent", "name": t.name}
    out = {
        "k": "app",
        "head": term_to_json(t.head),
        "args": [term_to_json(a) for a in t.args],
        "order": t.order,
    }
    if t.pieces_override is not None:
        out["pieces"] = pieces_to_json(t.pieces_override)
    return out


def term_from_json(payload):
    kind = payload["k"]
    if kind == "const":
        anchor = payload.get("anchor")
        return Constant(
            payload["lemma"],
            type_from_json(payload["type"]),
            Slice(anchor["sent"], anchor["start"], anchor["end"]) if anchor else None,
            payload.get("voice", "active"),
            payload.get("oblique", False),
        )
    if kind == "ent":
        return Entity(payload["name"])
    if kind == "app":
        override = payload.get("pieces")
        return Application(
            term_from_json(payload["head"]),
            tuple(term_from_json(a) for a in payload["args"]),
            payload.get("order", "prefix"),
            pieces_from_json(override) if override is not None else None,
        )
    raise FormatError(f"unknown term kind {kind!r}")


# -- proofs --------------------------------------------------------------------


def proof_to_json(problem_id: str, searched: str, tab: Tableau, config: dict) -> dict:
    nodes = []
    for eid in sorted(tab.entries):
        e = tab.entries[eid]
        app = tab.apps[e.produced_by] if e.produced_by is not None else None
        nodes.append({
            "id": e.id,
            "sign": e.sign,
            "segment": e.segment,
            "producedBy": (
                {"rule": app.rule, "antecedents": list(app.antecedents)}
                if app else "root"
            ),
            "surface": {
                "pieces": pieces_to_json(e.pieces()),
                "compact": compact_pieces(e.pieces()),
            },
            "rendered": tab.render_entry(e),
            "term": term_to_json(e.term),
            "args": [term_to_json(a) for a in e.args],
        })
    segments = [
        {"id": s.id, "parent": s.parent, "entries": list(s.entries)}
        for s in (tab.segments[k] for k in sorted(tab.segments))
    ]
    applications = []
    for aid in sorted(tab.apps):
        a = tab.apps[aid]
        applications.append({
            "id": a.id,
            "rule": a.rule,
            "antecedents": list(a.antecedents),
            "segment": a.segment,
            "producedSegments": list(a.produced_segments),
            "producedEntries": list(a.produced_entries),
            "witness": a.witness,
            "entity": a.entity,
        })
    closures = []
    for leaf in sorted(tab.closures):
        rec = tab.closures[leaf]
        closures.append({
            "rule": rec.rule,
            "antecedents": sorted(rec.antecedents),
            "branch": leaf,
            "relation": _relation_to_json(rec.relation),
        })
    return {
        "problemId": problem_id,
        "searchedRelation": searched,
        "config": config,
        "texts": list(tab.texts),
        "nodes": nodes,
        "segments": segments,
        "applications": applications,
        "closures": closures,
    }


def _relation_to_json(rel: RelationUse | None):
    if rel is None:
        return None
    return {
        "rel": rel.rel,
        "lhs": rel.lhs,
        "rhs": rel.rhs,
        "lhsPieces": pieces_to_json(rel.lhs_pieces),
        "rhsPieces": pieces_to_json(rel.rhs_pieces),
        "voices": list(rel.voices) if rel.voices else None,
    }


def tableau_from_json(payload: dict) -> Tableau:
    """Rebuild the exact tableau a proof file describes."""
    from .tableau import RuleApplication, Segment, TableauEntry

    tab = Tableau(payload["texts"])
    tab.segments = {}
    for seg in payload["segments"]:
        tab.segments[seg["id"]] = Segment(seg["id"], seg["parent"], list(seg["entries"]))
    for seg in payload["segments"]:
        if seg["parent"] is not None:
            tab.segments[seg["parent"]].children.append(seg["id"])
    for node in payload["nodes"]:
        produced = node["producedBy"]
        entry = TableauEntry(
            node["id"],
            term_from_json(node["term"]),
            tuple(term_from_json(a) for a in node["args"]),
            node["sign"],
            node["segment"],
            None if produced == "root" else _app_id_of(payload, node["id"]),
        )
        if produced == "root":
            entry.pieces_override = pieces_from_json(node["surface"]["pieces"])
        tab.entries[entry.id] = entry
    for app in payload["applications"]:
        tab.apps[app["id"]] = RuleApplication(
            app["id"], app["rule"], tuple(app["antecedents"]), app["segment"],
            tuple(app["producedSegments"]), tuple(app["producedEntries"]),
            app["witness"], app["entity"],
        )
    for rec in payload["closures"]:
        relation = rec.get("relation")
        rel = None
        if relation is not None:
            rel = RelationUse(
                relation["rel"], relation["lhs"], relation["rhs"],
                pieces_from_json(relation["lhsPieces"]),
                pieces_from_json(relation["rhsPieces"]),
                tuple(relation["voices"]) if relation.get("voices") else None,
            )
        tab.closures[rec["branch"]] = ClosureRecord(
            rec["rule"], tuple(rec["antecedents"]), rec["branch"], rel)
    tab._next_entry = max(tab.entries, default=0) + 1
    tab._next_segment = max(tab.segments, default=0) + 1
    tab._next_app = max(tab.apps, default=0) + 1
    entity_names = sorted({
        a["entity"] for a in payload["applications"] if a.get("entity")
    })
    tab._entities = entity_names
    return tab


def _app_id_of(payload: dict, entry_id: int):
    for app in payload["applications"]:
        if entry_id in app["producedEntries"]:
            return app["id"]
    raise FormatError(f"node {entry_id} has no producing application")


# -- corpora -------------------------------------------------------------------


def load_corpus(path) -> list:
    problems = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{path}:{lineno}: bad JSON ({exc})") from None
            if "config" in obj and "id" not in obj:
                continue  # header record
            try:
                problems.append(NLIProblem(
                    str(obj["id"]),
                    tuple(obj["premises"]),
                    obj["hypothesis"],
                    obj.get("gold"),
                ))
            except (KeyError, ValueError) as exc:
                raise FormatError(f"{path}:{lineno}: bad problem record ({exc})") from None
    return problems


def load_jsonl(path) -> list:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(json.loads(line))
    return out
