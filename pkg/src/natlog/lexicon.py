"""Knowledge base of phrase relations, monotonicity marks and frame pairs.

The KB file is UTF-8 TSV, one record per line:

    lhs<TAB>rel<TAB>rhs[<TAB>lhsVoice,rhsVoice]   rel in {sub, equ, alt}
    mono<TAB>lemma<TAB>pos<TAB>up|down
    subsective<TAB>lemma

Lines starting with `#` are comments.  Phrases are space-joined lemma
sequences ("slow down", "small animal").
"""

from __future__ import annotations

from dataclasses import dataclass

UP = "up"
DOWN = "down"
NONE = "none"

SUB = "sub"
EQU = "equ"
ALT = "alt"

# Transitive subsumption chains are followed at lookup time up to this depth.
SUB_CHAIN_DEPTH = 4


class KBError(Exception):
    """Malformed or contradictory knowledge-base input."""


@dataclass(frozen=True)
class LexicalRelation:
    lhs: str
    rhs: str
    rel: str
    voices: tuple | None = None  # (lhsVoice, rhsVoice) for frame pairs


class KnowledgeBase:
    """Immutable after load; lookups are pure."""

    def __init__(self):
        self._sub_edges: dict[str, list[str]] = {}
        self._alt_pairs: set = set()
        self._frame_subs: set = set()  # (lhs, lhsVoice, rhs, rhsVoice)
        self._mono: dict[tuple, str] = {}
        self._subsective: set = set()
        self._records: list[tuple] = []  # canonical dump order

    # -- construction -----------------------------------------------------

    def _add_relation(self, lhs: str, rel: str, rhs: str, voices, lineno):
        if voices is not None:
            if rel == ALT:
                raise KBError(f"line {lineno}: voice annotation is only for sub/equ")
            self._frame_subs.add((lhs, voices[0], rhs, voices[1]))
            if rel == EQU:
                self._frame_subs.add((rhs, voices[1], lhs, voices[0]))
            self._records.append(("rel", lhs, rel, rhs, voices))
            return
        if rel == SUB:
            self._sub_edges.setdefault(lhs, []).append(rhs)
        elif rel == EQU:
            self._sub_edges.setdefault(lhs, []).append(rhs)
            self._sub_edges.setdefault(rhs, []).append(lhs)
        elif rel == ALT:
            self._alt_pairs.add(frozenset((lhs, rhs)))
        else:
            raise KBError(f"line {lineno}: unknown relation {rel!r}")
        self._records.append(("rel", lhs, rel, rhs, None))

    def _add_mono(self, lemma: str, pos: int, direction: str, lineno):
        key = (lemma, pos)
        if key in self._mono and self._mono[key] != direction:
            raise KBError(
                f"line {lineno}: conflicting monotonicity for {lemma} at {pos}"
            )
        self._mono[key] = direction
        self._records.append(("mono", lemma, pos, direction))

    def _validate(self):
        for pair in self._alt_pairs:
            a, b = sorted(pair) if len(pair) == 2 else (min(pair), min(pair))
            if a == b:
                raise KBError(f"{a} cannot alternate with itself")
            if self.is_subsumed(a, b) or self.is_subsumed(b, a):
                raise KBError(
                    f"contradictory entries: {a}|{b} conflicts with a "
                    f"subsumption between {a!r} and {b!r}"
                )

    # -- lookups ----------------------------------------------------------

    def is_subsumed(self, a: str, b: str) -> bool:
        """True when `a` entails `b` on identical arguments (reflexive)."""
        if a == b:
            return True
        frontier = [a]
        seen = {a}
        for _ in range(SUB_CHAIN_DEPTH):
            nxt = []
            for phrase in frontier:
                for target in self._sub_edges.get(phrase, ()):
                    if target == b:
                        return True
                    if target not in seen:
                        seen.add(target)
                        nxt.append(target)
            if not nxt:
                return False
            frontier = nxt
        return False

    def is_alternative(self, a: str, b: str) -> bool:
        return frozenset((a, b)) in self._alt_pairs

    def frame_subsumed(self, a: str, a_voice: str, b: str, b_voice: str) -> bool:
        """Cross-voice subsumption; a predicate subsumes itself across voice."""
        if a == b:
            return True
        return (a, a_voice, b, b_voice) in self._frame_subs

    def monotonicity(self, lemma: str, pos: int) -> str:
        return self._mono.get((lemma, pos), NONE)

    def is_subsective(self, lemma: str) -> bool:
        return lemma in self._subsective

    def relations(self) -> list[LexicalRelation]:
        out = []
        for rec in self._records:
            if rec[0] == "rel":
                _, lhs, rel, rhs, voices = rec
                out.append(LexicalRelation(lhs, rhs, rel, voices))
        return out

    # -- serialization ----------------------------------------------------

    def dump(self) -> str:
        """Canonical TSV: unique records, sorted; load(dump()) round-trips."""
        lines = set()
        for rec in self._records:
            if rec[0] == "rel":
                _, lhs, rel, rhs, voices = rec
                if voices is not None:
                    lines.add(f"{lhs}\t{rel}\t{rhs}\t{voices[0]},{voices[1]}")
                else:
                    lines.add(f"{lhs}\t{rel}\t{rhs}")
            elif rec[0] == "mono":
                _, lemma, pos, direction = rec
                lines.add(f"mono\t{lemma}\t{pos}\t{direction}")
        for lemma in self._subsective:
            lines.add(f"subsective\t{lemma}")
        return "".join(line + "\n" for line in sorted(lines))


def parse_kb(text: str) -> KnowledgeBase:
    kb = KnowledgeBase()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        kind = fields[0]
        if kind == "mono":
            if len(fields) != 4:
                raise KBError(f"line {lineno}: mono needs lemma, pos, direction")
            _, lemma, pos_s, direction = fields
            if direction not in (UP, DOWN):
                raise KBError(f"line {lineno}: direction must be up or down")
            try:
                pos = int(pos_s)
            except ValueError:
                raise KBError(f"line {lineno}: bad position {pos_s!r}") from None
            if pos < 1:
                raise KBError(f"line {lineno}: position must be >= 1")
            kb._add_mono(lemma, pos, direction, lineno)
        elif kind == "subsective":
            if len(fields) != 2:
                raise KBError(f"line {lineno}: subsective needs one lemma")
            kb._subsective.add(fields[1])
        else:
            if len(fields) not in (3, 4):
                raise KBError(
                    f"line {lineno}: expected lhs<TAB>rel<TAB>rhs, got {line!r}"
                )
            lhs, rel, rhs = fields[0], fields[1], fields[2]
            voices = None
            if len(fields) == 4:
                parts = fields[3].split(",")
                if len(parts) != 2 or not all(
                    p in ("active", "passive") for p in parts
                ):
                    raise KBError(f"line {lineno}: bad voice pair {fields[3]!r}")
                voices = (parts[0], parts[1])
            kb._add_relation(lhs, rel, rhs, voices, lineno)
    kb._validate()
    return kb


def load_kb(path) -> KnowledgeBase:
    with open(path, encoding="utf-8") as fh:
        return parse_kb(fh.read())
