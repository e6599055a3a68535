"""Tableau data structures: signed entries, segments, closure detection.

A tableau is a tree of segments; each segment holds an ordered run of signed
entries, and a branch is the entry sequence from the root segment down to a
leaf.  A branch closes when two of its entries carry incompatible
information; the closure check compares entries up to head/argument-list
formatting, so `many bird : [fly]` and `many : [bird, fly]` are the same
entry as far as inconsistency detection is concerned.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .lexicon import KnowledgeBase
from .terms import (
    Application,
    Entity,
    PASSIVE,
    S,
    Slice,
    SurfaceExpr,
    Term,
    applied_type,
    canonical_form,
    head_constant,
    lemma_seq,
    term_key,
    term_pieces,
    type_of,
)

T = "T"
F = "F"

# Closure rule names.
CLOSE_SUB = "close_sub"
CLOSE_ALT = "close_alt"
FRAME_ALT = "frame_alt"


class TableauError(Exception):
    pass


@dataclass(frozen=True)
class RelationUse:
    """A knowledge-base relation consulted while closing a branch."""

    rel: str  # "sub" or "alt"
    lhs: str
    rhs: str
    lhs_pieces: SurfaceExpr
    rhs_pieces: SurfaceExpr
    voices: tuple | None = None


@dataclass
class TableauEntry:
    id: int
    term: Term
    args: tuple
    sign: str
    segment: int
    produced_by: int | None = None  # RuleApplication id; None for roots
    pieces_override: tuple | None = None  # root entries show the whole sentence

    def key(self):
        head, full = canonical_form(self.term, self.args)
        return (term_key(head), tuple(term_key(a) for a in full))

    def pieces(self) -> SurfaceExpr:
        return self.pieces_override if self.pieces_override is not None else term_pieces(self.term)


@dataclass
class RuleApplication:
    id: int
    rule: str
    antecedents: tuple
    segment: int  # the segment that was extended
    produced_segments: tuple = ()
    produced_entries: tuple = ()
    witness: str | None = None  # per-branch dedup discriminator
    entity: str | None = None  # fresh entity introduced, if any

    def dedup_key(self):
        return (self.rule, self.antecedents, self.witness)


@dataclass
class ClosureRecord:
    rule: str
    antecedents: tuple
    leaf: int
    relation: RelationUse | None = None


@dataclass
class Segment:
    id: int
    parent: int | None
    entries: list = field(default_factory=list)
    children: list = field(default_factory=list)


class Tableau:
    """Mutable proof-search state for one refutation attempt."""

    def __init__(self, texts):
        self.texts = tuple(texts)
        self.segments: dict[int, Segment] = {0: Segment(0, None)}
        self.entries: dict[int, TableauEntry] = {}
        self.apps: dict[int, RuleApplication] = {}
        self.closures: dict[int, ClosureRecord] = {}
        self._next_entry = 1
        self._next_segment = 1
        self._next_app = 1
        self._entities: list[str] = []

    # -- growth -------------------------------------------------------------

    def add_segment(self, parent: int) -> int:
        sid = self._next_segment
        self._next_segment += 1
        self.segments[sid] = Segment(sid, parent)
        self.segments[parent].children.append(sid)
        return sid

    def add_entry(self, segment: int, term: Term, args, sign: str, produced_by=None) -> TableauEntry:
        args = tuple(args)
        result = applied_type(type_of(term), [type_of(a) for a in args])
        if result != S:
            raise TableauError(f"entry is not sentence-typed: {result}")
        entry = TableauEntry(self._next_entry, term, args, sign, segment, produced_by)
        self._next_entry += 1
        self.entries[entry.id] = entry
        self.segments[segment].entries.append(entry.id)
        return entry

    def add_application(self, rule, antecedents, segment, witness=None) -> RuleApplication:
        app = RuleApplication(self._next_app, rule, tuple(antecedents), segment, witness=witness)
        self._next_app += 1
        self.apps[app.id] = app
        return app

    def fresh_entity(self) -> Entity:
        index = len(self._entities)
        name = chr(ord("c") + index) if index < 24 else f"c{index}"
        self._entities.append(name)
        return Entity(name)

    @property
    def entity_count(self) -> int:
        return len(self._entities)

    # -- structure ----------------------------------------------------------

    def leaves(self):
        return [s.id for s in self.segments.values() if not s.children]

    def open_leaves(self):
        return [sid for sid in sorted(self.leaves()) if sid not in self.closures]

    def branch_segments(self, leaf: int):
        chain = []
        sid: int | None = leaf
        while sid is not None:
            chain.append(sid)
            sid = self.segments[sid].parent
        return list(reversed(chain))

    def branch_entries(self, leaf: int):
        out = []
        for sid in self.branch_segments(leaf):
            out.extend(self.entries[eid] for eid in self.segments[sid].entries)
        return out

    def fired_keys(self, leaf: int):
        segs = set(self.branch_segments(leaf))
        return {app.dedup_key() for app in self.apps.values() if app.segment in segs}

    def close(self, record: ClosureRecord):
        self.closures[record.leaf] = record

    def is_closed(self) -> bool:
        return all(sid in self.closures for sid in self.leaves())

    # -- rendering ------------------------------------------------------------

    def render_entry(self, entry: TableauEntry) -> str:
        """Human-readable form; interpolates entity arguments at their
        natural position (subject first for actives, agent last for
        passives)."""
        from .terms import render_surface

        term_str = render_surface(entry.pieces(), self.texts)
        if not entry.args:
            return term_str
        arg_strs = [render_surface(term_pieces(a), self.texts) for a in entry.args]
        if len(entry.args) == 1 and isinstance(entry.args[0], Entity):
            head = head_constant(entry.term)
            if head is not None and head.voice == PASSIVE:
                return f"{term_str} {arg_strs[0]}"
            return f"{arg_strs[0]} {term_str}"
        return " ".join([term_str] + arg_strs)

    def machine_entry(self, entry: TableauEntry) -> str:
        parts = ["".join(str(p) for p in entry.pieces())]
        for a in entry.args:
            parts.append("".join(str(p) for p in term_pieces(a)))
        return " : ".join(parts + [entry.sign])


def init_tableau(sentences) -> Tableau:
    """Start a tableau from (FragmentSentence, sign) roots."""
    if not sentences:
        raise TableauError("at least one signed root is required")
    texts = [s.text for s, _ in sentences]
    tab = Tableau(texts)
    for sent, sign in sentences:
        entry = tab.add_entry(0, sent.term, (), sign, produced_by=None)
        byte_len = len(sent.text.encode("utf-8"))
        entry.pieces_override = (Slice(sent.sid, 0, byte_len),)
    return tab


# -- closure ------------------------------------------------------------------


def check_closure(tab: Tableau, leaf: int, kb: KnowledgeBase):
    """First applicable inconsistency on the branch, by lowest id pair.

    Three closure conditions, each compared up to argument formatting:
    identical entries with opposite signs (or a stored subsumption between a
    true and a false entry over the same arguments), two true entries whose
    heads alternate, and a cross-voice pair related by a frame alternation.
    """
    entries = tab.branch_entries(leaf)
    for j in range(1, len(entries)):
        for i in range(j):
            rec = _match_pair(entries[i], entries[j], kb, leaf)
            if rec is not None:
                return rec
    return None


def _splits(entry: TableauEntry):
    """All (applied-head phrase, remaining args) readings of an entry."""
    head, args = canonical_form(entry.term, entry.args)
    out = []
    for k in range(len(args) + 1):
        if k == 0:
            applied: Term = head
        else:
            applied = Application(head, args[:k])
        out.append((applied, args[k:]))
    return out


def _phrase(term: Term) -> str:
    return " ".join(lemma_seq(term))


def _match_pair(e1: TableauEntry, e2: TableauEntry, kb, leaf):
    if e1.sign != e2.sign:
        true_e, false_e = (e1, e2) if e1.sign == T else (e2, e1)
        if e1.key() == e2.key():
            return ClosureRecord(CLOSE_SUB, (e1.id, e2.id), leaf, None)
        rec = _lookup_signed(true_e, false_e, kb, leaf, (e1.id, e2.id))
        if rec is not None:
            return rec
        return None
    if e1.sign == T:
        return _lookup_alternation(e1, e2, kb, leaf)
    return None


def _aligned_splits(a: TableauEntry, b: TableauEntry):
    for term_a, rest_a in _splits(a):
        for term_b, rest_b in _splits(b):
            if len(rest_a) != len(rest_b):
                continue
            if tuple(term_key(x) for x in rest_a) != tuple(term_key(x) for x in rest_b):
                continue
            yield term_a, term_b


def _lookup_signed(true_e, false_e, kb, leaf, ant):
    for term_t, term_f in _aligned_splits(true_e, false_e):
        pk_t, pk_f = _phrase(term_t), _phrase(term_f)
        if pk_t != pk_f and kb.is_subsumed(pk_t, pk_f):
            rel = RelationUse("sub", pk_t, pk_f, term_pieces(term_t), term_pieces(term_f))
            return ClosureRecord(CLOSE_SUB, ant, leaf, rel)
        head_t, head_f = head_constant(term_t), head_constant(term_f)
        if head_t is not None and head_f is not None and head_t.voice != head_f.voice:
            if kb.frame_subsumed(pk_t, head_t.voice, pk_f, head_f.voice):
                rel = RelationUse(
                    "sub",
                    pk_t,
                    pk_f,
                    term_pieces(term_t),
                    term_pieces(term_f),
                    voices=(head_t.voice, head_f.voice),
                )
                return ClosureRecord(FRAME_ALT, ant, leaf, rel)
    return None


def _lookup_alternation(e1, e2, kb, leaf):
    for term_1, term_2 in _aligned_splits(e1, e2):
        pk1, pk2 = _phrase(term_1), _phrase(term_2)
        if pk1 != pk2 and kb.is_alternative(pk1, pk2):
            lhs, rhs = sorted((pk1, pk2))
            pieces = {pk1: term_pieces(term_1), pk2: term_pieces(term_2)}
            rel = RelationUse("alt", lhs, rhs, pieces[lhs], pieces[rhs])
            return ClosureRecord(CLOSE_ALT, (e1.id, e2.id), leaf, rel)
    return None
