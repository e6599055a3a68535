"""Brute-force finite-model checker over a fixed fragment semantics.

This is the independent referee for the prover: it enumerates every model up
to a small universe size and reports the first situation where the premises
hold and the target relation fails.  A proof is only trusted when this
search comes back empty.

Semantics (one consistent instantiation, documented here because nothing
upstream fixes it):

    some/a/the N V   nonempty intersection of N and V
    every/all N V    N is a subset of V            (no existential import)
    no N V           empty intersection
    many N V         |N and V| > |N| / 2           (false for empty N)
    few N V          |N and V| < |N| / 2           (false for empty N)
    not              complement (properties) / negation (sentences)
    and / or         intersection / union, pointwise
    modifier M H     an own atom constrained to a subset of H
    transitive verbs one atom per (verb, object) pair, voice-normalized, so
                     active and passive clauses of one frame agree by
                     construction and annotated frame pairs become subset
                     constraints

Knowledge-base relations over property phrases become hard constraints on
the admissible models; relations over determiners are validated against the
fixed semantics by the test suite instead.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .grammar import FragmentSentence
from .lexicon import KnowledgeBase
from .terms import (
    Application,
    Constant,
    E,
    Entity,
    FunType,
    N,
    VP,
    Term,
    phrase_key,
)

ENTAILMENT = "entailment"
CONTRADICTION = "contradiction"


class OracleUnsupported(Exception):
    """The sentence falls outside the fragment this semantics covers."""


@dataclass(frozen=True)
class FiniteModel:
    size: int
    properties: dict
    entities: dict

    def jsonable(self):
        return {
            "size": self.size,
            "properties": {
                atom_label(k): sorted(v) for k, v in sorted(self.properties.items())
            },
            "entities": dict(sorted(self.entities.items())),
        }


def atom_label(key) -> str:
    if key[0] == "p":
        return key[1]
    if key[0] == "r":
        return f"{key[1]}({key[2]})"
    if key[0] == "m":
        return f"{key[1]} {atom_label(key[2])}"
    return str(key[1])


def _is_det(c: Constant) -> bool:
    return isinstance(c.type, FunType) and c.type.args == (N, VP)


_DET_SEMANTICS = {
    "some": lambda n, v: len(n & v) > 0,
    "a": lambda n, v: len(n & v) > 0,
    "the": lambda n, v: len(n & v) > 0,
    "every": lambda n, v: n <= v,
    "all": lambda n, v: n <= v,
    "no": lambda n, v: len(n & v) == 0,
    "many": lambda n, v: 2 * len(n & v) > len(n),
    "few": lambda n, v: len(n) > 0 and 2 * len(n & v) < len(n),
}


def det_holds(lemma: str, n: frozenset, v: frozenset) -> bool:
    return _DET_SEMANTICS[lemma](n, v)


# -- signature collection -------------------------------------------------------


_CONNECTIVES = ("not", "and", "or")


def _atom_key(term: Term):
    """Key of a property atom, voice-normalized for verbs."""
    if isinstance(term, Constant) and term.type in (N, VP):
        return ("p", term.lemma)
    if isinstance(term, Application) and isinstance(term.head, Constant):
        head = term.head
        if head.lemma in _CONNECTIVES:
            return None
        if head.type == FunType((E,), VP) and len(term.args) == 1:
            return ("r", head.lemma, _entity_name(term.args[0]))
        if (
            isinstance(head.type, FunType)
            and len(head.type.args) == 1
            and head.type.args[0] == head.type.result
        ):
            return ("m", head.lemma, _atom_or_composite(term.args[0]))
    return None


def _entity_name(term: Term) -> str:
    if isinstance(term, Constant) and term.type == E:
        return term.lemma
    if isinstance(term, Entity):
        return term.name
    raise OracleUnsupported(f"object is not a constant: {term}")


def _atom_or_composite(term: Term):
    key = _atom_key(term)
    return key if key is not None else ("x", phrase_key(term))


@dataclass
class _Signature:
    atoms: list
    entity_names: list
    constraints: list  # callables model -> bool


def _collect(term: Term, sig: _Signature, kb: KnowledgeBase):
    if isinstance(term, Entity):
        raise OracleUnsupported("free proof witnesses have no fixed meaning")
    if isinstance(term, Constant):
        if term.type in (N, VP):
            _add_atom(sig, ("p", term.lemma))
        elif term.type == E:
            if term.lemma not in sig.entity_names:
                sig.entity_names.append(term.lemma)
        elif not isinstance(term.type, FunType):
            raise OracleUnsupported(f"constant of type {term.type}")
        return
    if not isinstance(term, Application):
        raise OracleUnsupported(f"unknown term {term!r}")
    head = term.head
    key = _atom_key(term)
    if key is not None and key[0] == "r":
        _add_atom(sig, key)
        _collect(term.args[0], sig, kb)
        return
    if key is not None and key[0] == "m":
        _add_atom(sig, key)
        _collect(term.args[0], sig, kb)
        inner = term.args[0]
        sig.constraints.append(
            lambda m, k=key, t=inner: m.properties[k] <= _eval_property(t, m)
        )
        return
    if isinstance(head, Constant) and (head.lemma in ("not", "and", "or") or _is_det(head)):
        for a in term.args:
            _collect(a, sig, kb)
        return
    # Fully applied property over a constant subject.
    if len(term.args) == 1:
        _collect(head, sig, kb)
        _collect(term.args[0], sig, kb)
        return
    raise OracleUnsupported(f"unsupported construction {term!r}")


def _add_atom(sig: _Signature, key):
    if key not in sig.atoms:
        sig.atoms.append(key)


def _kb_constraints(sig: _Signature, kb: KnowledgeBase):
    """Relation constraints between atoms present in the problem."""
    by_phrase: dict[str, list] = {}
    for key in sig.atoms:
        phrase, context = _phrase_and_context(key)
        by_phrase.setdefault(phrase, []).append((key, context))

    def add(kind, ka, kb_):
        if kind == "sub":
            sig.constraints.append(lambda m, a=ka, b=kb_: m.properties[a] <= m.properties[b])
        else:
            sig.constraints.append(lambda m, a=ka, b=kb_: not (m.properties[a] & m.properties[b]))

    for rel in kb.relations():
        lhs_atoms = by_phrase.get(rel.lhs, ())
        rhs_atoms = by_phrase.get(rel.rhs, ())
        for (ka, ctx_a) in lhs_atoms:
            for (kb2, ctx_b) in rhs_atoms:
                if ctx_a != ctx_b or ka == kb2:
                    continue
                if rel.rel == "sub":
                    add("sub", ka, kb2)
                elif rel.rel == "equ":
                    add("sub", ka, kb2)
                    add("sub", kb2, ka)
                else:
                    add("alt", ka, kb2)


def _phrase_and_context(key):
    if key[0] == "p":
        return key[1], None
    if key[0] == "r":
        return key[1], key[2]  # verb lemma; object is the shared context
    # modifier atom: phrase is "mod inner-phrase"
    return f"{key[1]} {_context_phrase(key[2])}", None


def _context_phrase(inner_key):
    if inner_key[0] in ("p",):
        return inner_key[1]
    if inner_key[0] == "m":
        return f"{inner_key[1]} {_context_phrase(inner_key[2])}"
    if inner_key[0] == "x":
        return inner_key[1]
    return str(inner_key)


# -- evaluation ------------------------------------------------------------------


def _eval_property(term: Term, model: FiniteModel) -> frozenset:
    key = _atom_key(term)
    if key is not None:
        return model.properties[key]
    if isinstance(term, Application) and isinstance(term.head, Constant):
        lemma = term.head.lemma
        if lemma == "not":
            universe = frozenset(range(1, model.size + 1))
            return universe - _eval_property(term.args[0], model)
        if lemma == "and":
            return _eval_property(term.args[0], model) & _eval_property(term.args[1], model)
        if lemma == "or":
            return _eval_property(term.args[0], model) | _eval_property(term.args[1], model)
    raise OracleUnsupported(f"not a property: {term!r}")


def holds(term: Term, model: FiniteModel) -> bool:
    """Truth of a sentence-typed term in the model."""
    if isinstance(term, Application) and isinstance(term.head, Constant):
        head = term.head
        if _is_det(head) and len(term.args) == 2:
            n = _eval_property(term.args[0], model)
            v = _eval_property(term.args[1], model)
            if head.lemma not in _DET_SEMANTICS:
                raise OracleUnsupported(f"no semantics for determiner {head.lemma!r}")
            return det_holds(head.lemma, n, v)
        if head.lemma == "not":
            return not holds(term.args[0], model)
        if head.lemma == "and" and len(term.args) == 2:
            return holds(term.args[0], model) and holds(term.args[1], model)
        if head.lemma == "or" and len(term.args) == 2:
            return holds(term.args[0], model) or holds(term.args[1], model)
    if isinstance(term, Application) and len(term.args) == 1:
        subject = term.args[0]
        if isinstance(subject, (Constant, Entity)):
            element = model.entities[_entity_name(subject)]
            return element in _eval_property(term.head, model)
    raise OracleUnsupported(f"not a sentence: {term!r}")


# -- enumeration -----------------------------------------------------------------


def _signature(sentences, kb: KnowledgeBase) -> _Signature:
    sig = _Signature([], [], [])
    for sent in sentences:
        _collect(sent.term, sig, kb)
    sig.atoms.sort()
    sig.entity_names.sort()
    _kb_constraints(sig, kb)
    return sig


def iterate_models(sentences, kb: KnowledgeBase, size: int):
    """All admissible models with the given universe size, in a fixed order."""
    sig = _signature(sentences, kb)
    universe = list(range(1, size + 1))
    subsets = [frozenset(c) for r in range(size + 1) for c in itertools.combinations(universe, r)]
    for ent_choice in itertools.product(universe, repeat=len(sig.entity_names)):
        entities = dict(zip(sig.entity_names, ent_choice))
        for prop_choice in itertools.product(subsets, repeat=len(sig.atoms)):
            model = FiniteModel(size, dict(zip(sig.atoms, prop_choice)), entities)
            if all(c(model) for c in sig.constraints):
                yield model


def countermodel_search(premises, hypothesis: FragmentSentence, relation: str,
                        kb: KnowledgeBase, max_size: int = 3):
    """First model (by enumeration order) where all premises hold and the
    target relation fails; None when the exhaustive search finds nothing."""
    if relation not in (ENTAILMENT, CONTRADICTION):
        raise ValueError(f"unknown relation {relation!r}")
    sentences = list(premises) + [hypothesis]
    for size in range(1, max_size + 1):
        for model in iterate_models(sentences, kb, size):
            if not all(holds(p.term, model) for p in premises):
                continue
            h = holds(hypothesis.term, model)
            if (relation == ENTAILMENT and not h) or (relation == CONTRADICTION and h):
                return model
    return None
