"""Typed applicative terms with surface-span anchoring.

The term language is deliberately small: constants, fresh entities and
applications with an explicit argument list.  There is no abstraction and no
beta reduction; every operation below is about moving arguments across the
head/argument-list boundary and keeping track of where each word came from in
the source text.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

# Base semantic types: entities, sentences (truth values), noun properties
# and verb-phrase properties.
E = "e"
S = "s"
N = "n"
VP = "vp"
BASE_TYPES = (E, S, N, VP)

ACTIVE = "active"
PASSIVE = "passive"


class TermError(Exception):
    """An ill-typed term was constructed or applied."""


class BoundaryError(TermError):
    """Nothing to move across the head/argument-list boundary."""


class SurfaceError(Exception):
    """A surface anchor does not fit the referenced sentence."""


@dataclass(frozen=True)
class FunType:
    """Function type: consumes `args` in order, then yields `result`."""

    args: tuple
    result: str

    def __str__(self):
        parts = [str(a) for a in self.args] + [self.result]
        return "(" + ",".join(parts) + ")"


TermType = Union[str, FunType]


@dataclass(frozen=True)
class Slice:
    """Byte span [start:end) within sentence number `sent` (1-based)."""

    sent: int
    start: int
    end: int

    def __str__(self):
        return f"S{self.sent}[{self.start}:{self.end}]"


# A surface piece is either a Slice into a source sentence or a literal
# string (an entity name, a single space, or a lemma fallback for
# lexicon-introduced constants).
Piece = Union[Slice, str]
SurfaceExpr = tuple


def render_surface(pieces: Sequence[Piece], texts: Sequence[str]) -> str:
    """Concatenate surface pieces against the numbered source sentences.

    Slices are byte offsets into the UTF-8 encoding of the sentence and must
    land on character boundaries.
    """
    out = []
    for piece in pieces:
        if isinstance(piece, Slice):
            if not 1 <= piece.sent <= len(texts):
                raise SurfaceError(f"no sentence S{piece.sent}")
            raw = texts[piece.sent - 1].encode("utf-8")
            if not (0 <= piece.start < piece.end <= len(raw)):
                raise SurfaceError(f"{piece} out of bounds for S{piece.sent}")
            try:
                out.append(raw[piece.start : piece.end].decode("utf-8"))
            except UnicodeDecodeError:
                raise SurfaceError(f"{piece} splits a character") from None
        else:
            out.append(piece)
    return "".join(out)


@dataclass(frozen=True)
class Constant:
    """A lexical constant, optionally anchored to a span of the input.

    Constants without an anchor are lexicon-introduced (e.g. the covert
    existential determiner of a bare plural); their surface rendering falls
    back to the lemma.  `oblique` flags determiners whose noun phrase sits in
    a non-subject position (it changes rule labelling, not meaning).
    """

    lemma: str
    type: TermType
    anchor: Slice | None = None
    voice: str = ACTIVE
    oblique: bool = False


@dataclass(frozen=True)
class Entity:
    """A fresh witness introduced during proof search.  Type `e`."""

    name: str


@dataclass(frozen=True)
class Application:
    """`head` applied to `args`, with a word-order surface recipe.

    `order` records how the children linearize in the source text:
    "prefix"  head then arguments (determiners, verbs with objects),
    "infix"   first argument, head, second argument (boolean connectives),
    "suffix"  arguments then head (post-head modifiers such as adverbs).

    `pieces_override` replaces the derived surface when the construction is
    not a plain concatenation of its children (e.g. coordination sharing one
    object, or a passive clause whose agent slot sits at the end).
    """

    head: "Term"
    args: tuple
    order: str = "prefix"
    pieces_override: tuple | None = None

    def __post_init__(self):
        if not self.args:
            raise TermError("application needs at least one argument")
        applied_type(type_of(self.head), [type_of(a) for a in self.args])


Term = Union[Constant, Entity, Application]


def type_of(t: Term) -> TermType:
    if isinstance(t, Constant):
        return t.type
    if isinstance(t, Entity):
        return E
    return applied_type(type_of(t.head), [type_of(a) for a in t.args])


def applied_type(head_type: TermType, arg_types: Sequence[TermType]) -> TermType:
    """Type of `head_type` applied to `arg_types` in order.

    Noun and verb-phrase properties behave as one-place predicates over
    entities: applying them to an `e` argument yields `s`.
    """
    current = head_type
    for at in arg_types:
        if isinstance(current, FunType):
            expected = current.args[0]
            if expected != at:
                raise TermError(f"expected argument of type {expected}, got {at}")
            rest = current.args[1:]
            current = FunType(rest, current.result) if rest else current.result
        elif current in (N, VP):
            if at != E:
                raise TermError(f"property {current} applied to non-entity {at}")
            current = S
        else:
            raise TermError(f"type {current} is not applicable")
    return current


def term_key(t: Term):
    """Structural identity key: ignores anchors and surface order.

    Two occurrences of the same word in different sentences compare equal;
    voice is part of identity so that cross-voice comparison stays a
    knowledge-base question.
    """
    if isinstance(t, Constant):
        return ("c", t.lemma, str(t.type), t.voice)
    if isinstance(t, Entity):
        return ("e", t.name)
    return ("a", term_key(t.head), tuple(term_key(a) for a in t.args))


def term_pieces(t: Term) -> SurfaceExpr:
    """Surface pieces of a term in source word order."""
    if isinstance(t, Constant):
        return (t.anchor,) if t.anchor is not None else (t.lemma,)
    if isinstance(t, Entity):
        return (t.name,)
    if t.pieces_override is not None:
        return t.pieces_override
    child_pieces = [term_pieces(c) for c in _linearize(t)]
    out: list = []
    for pieces in child_pieces:
        if out:
            out.append(" ")
        out.extend(pieces)
    return tuple(out)


def lemma_seq(t: Term) -> tuple:
    """Lemma sequence of a term in source word order (phrase lookup key)."""
    if isinstance(t, Constant):
        return (t.lemma,)
    if isinstance(t, Entity):
        return (t.name,)
    out: list = []
    for c in _linearize(t):
        out.extend(lemma_seq(c))
    return tuple(out)


def phrase_key(t: Term) -> str:
    return " ".join(lemma_seq(t))


def _linearize(t: Application) -> list:
    if t.order == "infix" and len(t.args) == 2:
        return [t.args[0], t.head, t.args[1]]
    if t.order == "suffix":
        return list(t.args) + [t.head]
    return [t.head] + list(t.args)


def head_constant(t: Term) -> Constant | None:
    """The base constant in head position, if any."""
    while isinstance(t, Application):
        t = t.head
    return t if isinstance(t, Constant) else None


def push_arg(term: Term, args: Sequence[Term]):
    """Move the innermost applied argument into the front of the list.

    (A B):[C] becomes A:[B,C].  Requires the head to be an application.
    """
    if not isinstance(term, Application):
        raise BoundaryError("nothing to push: head is not an application")
    moved = term.args[-1]
    if len(term.args) == 1:
        new_term: Term = term.head
    else:
        new_term = Application(term.head, term.args[:-1], term.order)
    return new_term, (moved,) + tuple(args)


def pop_arg(term: Term, args: Sequence[Term]):
    """Apply the first list argument onto the head: A:[B,C] becomes (A B):[C]."""
    if not args:
        raise BoundaryError("nothing to pop: argument list is empty")
    first, rest = args[0], tuple(args[1:])
    if isinstance(term, Application):
        new_term: Term = Application(term.head, term.args + (first,), term.order)
    else:
        new_term = Application(term, (first,))
    return new_term, rest


def canonical_form(term: Term, args: Sequence[Term] = ()):
    """Fully-pushed form: bare head plus the complete argument list.

    Idempotent; the canonical form is the equality used when comparing
    entries that only differ in head/argument formatting.
    """
    args = tuple(args)
    while isinstance(term, Application):
        term, args = push_arg(term, args)
    return term, args


def entry_key(term: Term, args: Sequence[Term]):
    """Format-independent identity of a (term, argument list) pairing."""
    head, full = canonical_form(term, args)
    return (term_key(head), tuple(term_key(a) for a in full))
