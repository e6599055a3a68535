"""The inference rules that expand tableau entries.

Each rule inspects entries through their canonical (bare head + full
argument list) reading, so surface formatting never blocks a rule.  A rule
application produces one segment (linear rules) or two (branching rules);
every produced entry records which application created it.

Sign tables:

    neg        (not X):[a]:s          ->  X:[a]:flip(s)
    conj       (X and Y):[a]:T        ->  X:[a]:T, Y:[a]:T           (linear)
               (X and Y):[a]:F        ->  X:[a]:F | Y:[a]:F          (branch)
    disj       (X or Y):[a]:T         ->  X:[a]:T | Y:[a]:T          (branch)
               (X or Y):[a]:F         ->  X:[a]:F, Y:[a]:F           (linear)
    exists_T   (Q N V):T, Q exist.    ->  N:[x]:T, V:[x]:T, x fresh
    forall_F   (Q N V):F, Q univ.     ->  N:[x]:T, V:[x]:F, x fresh
    exists_F   (Q N V):F, Q exist.    ->  V:[x]:F when N:[x]:T on branch,
                                          else N:[x]:F | V:[x]:F per entity x
    substitute exists_F applied to a non-subject noun phrase
    forall_T   (Q N V):T, Q univ.     ->  V:[x]:T when N:[x]:T on branch
    adj_sub_T  (M H):[a]:T, M subsective -> H:[a]:T
    upDisCov   f:[..,x]:T (pos up), g:[..,y]:T sharing other args ->
                   x:[c]:T, y:[c]:F  |  f:[..,y]:T, g:[..,y]:T
    downSubst  the same with x and y swapped in the witness branch
    arg_push   formatting only: move arguments into the canonical list
"""

from __future__ import annotations

from dataclasses import dataclass

from .grammar import EXISTENTIAL_DETS, UNIVERSAL_DETS
from .lexicon import DOWN, UP, KnowledgeBase
from .tableau import F, T, Tableau, TableauEntry
from .terms import (
    Application,
    Constant,
    E,
    Entity,
    FunType,
    S,
    Term,
    applied_type,
    canonical_form,
    entry_key,
    term_key,
    type_of,
)

NEG = "neg"
CONJ = "conj"
DISJ = "disj"
EXISTS_T = "exists_T"
FORALL_F = "forall_F"
EXISTS_F = "exists_F"
FORALL_T = "forall_T"
SUBSTITUTE = "substitute"
ADJ_SUB_T = "adj_sub_T"
UP_DIS_COV = "upDisCov"
DOWN_SUBST = "downSubst"
ARG_PUSH = "arg_push"

# Structural rules carry no semantic content and are pruned from explanations.
STRUCTURAL_RULES = (ARG_PUSH,)

_ORDER = [
    NEG, CONJ, DISJ, ADJ_SUB_T, SUBSTITUTE, EXISTS_F, FORALL_T,
    EXISTS_T, FORALL_F, UP_DIS_COV, DOWN_SUBST, ARG_PUSH,
]

LINEAR, FRESH, BRANCHING = 1, 2, 3


@dataclass
class Candidate:
    cls: int
    primary: int
    rule: str
    antecedents: tuple
    segments: list  # list of segments, each a list of (term, args, sign)
    witness: str | None = None
    needs_fresh: bool = False
    fresh_slots: tuple = ()  # (segment, position) pairs taking the fresh entity

    def sort_key(self):
        return (self.cls, self.primary, _ORDER.index(self.rule),
                self.antecedents, self.witness or "")

    def dedup_key(self):
        return (self.rule, self.antecedents, self.witness)


def flip(sign: str) -> str:
    return F if sign == T else T


def _is_property(term: Term) -> bool:
    try:
        return applied_type(type_of(term), [E]) == S
    except Exception:
        return False


def _is_modifier(const: Constant) -> bool:
    t = const.type
    return isinstance(t, FunType) and len(t.args) == 1 and t.args[0] == t.result


def normalize_args(term: Term, args):
    """Formatting-only step to the canonical reading (the argument-push
    move); exposed for proof replay, the engine compares entries up to this
    normalization instead of materializing it."""
    return canonical_form(term, args)


def enumerate_candidates(tab: Tableau, leaf: int, kb: KnowledgeBase):
    """All rule applications available on the branch, in priority order:
    linear rules first (oldest antecedent first), then fresh-entity rules,
    then branching rules."""
    entries = tab.branch_entries(leaf)
    keys = {}
    for e in entries:
        keys.setdefault((e.key(), e.sign), e.id)
    entities = _branch_entities(entries)
    out = []
    for e in entries:
        out.extend(_boolean_candidates(e))
        out.extend(_modifier_candidates(e, kb))
        out.extend(_quantifier_candidates(e, entities, keys))
    out.extend(_monotonicity_candidates(entries, kb))
    return sorted(out, key=Candidate.sort_key)


def _branch_entities(entries):
    seen = []
    for e in entries:
        for a in e.args:
            if isinstance(a, Entity) and a.name not in [x.name for x in seen]:
                seen.append(a)
    return seen


def _boolean_candidates(e: TableauEntry):
    head, args = canonical_form(e.term, e.args)
    if not isinstance(head, Constant):
        return []
    if head.lemma == "not" and len(args) >= 1:
        body, rest = args[0], args[1:]
        return [Candidate(LINEAR, e.id, NEG, (e.id,),
                          [[(body, rest, flip(e.sign))]])]
    if head.lemma in ("and", "or") and len(args) >= 2:
        a, b, rest = args[0], args[1], args[2:]
        linear_sign = T if head.lemma == "and" else F
        rule = CONJ if head.lemma == "and" else DISJ
        if e.sign == linear_sign:
            return [Candidate(LINEAR, e.id, rule, (e.id,),
                              [[(a, rest, e.sign), (b, rest, e.sign)]])]
        return [Candidate(BRANCHING, e.id, rule, (e.id,),
                          [[(a, rest, e.sign)], [(b, rest, e.sign)]])]
    return []


def _modifier_candidates(e: TableauEntry, kb):
    if e.sign != T:
        return []
    head, args = canonical_form(e.term, e.args)
    if (
        isinstance(head, Constant)
        and _is_modifier(head)
        and kb.is_subsective(head.lemma)
        and len(args) >= 1
    ):
        return [Candidate(LINEAR, e.id, ADJ_SUB_T, (e.id,),
                          [[(args[0], args[1:], T)]])]
    return []


def _quantifier_candidates(e: TableauEntry, entities, keys):
    head, args = canonical_form(e.term, e.args)
    if not (isinstance(head, Constant) and isinstance(head.type, FunType)
            and len(head.type.args) == 2 and len(args) == 2):
        return []
    noun, vp = args
    out = []
    existential = head.lemma in EXISTENTIAL_DETS
    universal = head.lemma in UNIVERSAL_DETS
    if (existential and e.sign == T) or (universal and e.sign == F):
        rule = EXISTS_T if existential else FORALL_F
        vp_sign = T if existential else F
        out.append(Candidate(
            FRESH, e.id, rule, (e.id,),
            [[(noun, None, T), (vp, None, vp_sign)]],
            needs_fresh=True, fresh_slots=((0, 0), (0, 1)),
        ))
    if (existential and e.sign == F) or (universal and e.sign == T):
        vp_sign = F if existential else T
        for x in entities:
            witness_id = keys.get((entry_key(noun, (x,)), T))
            if witness_id is not None:
                rule = FORALL_T if universal else (
                    SUBSTITUTE if head.oblique else EXISTS_F)
                out.append(Candidate(
                    LINEAR, e.id, rule, (e.id, witness_id),
                    [[(vp, (x,), vp_sign)]], witness=x.name,
                ))
            elif existential:
                out.append(Candidate(
                    BRANCHING, e.id, EXISTS_F, (e.id,),
                    [[(noun, (x,), F)], [(vp, (x,), F)]], witness=x.name,
                ))
    return out


def _monotonicity_candidates(entries, kb: KnowledgeBase):
    out = []
    true_entries = [e for e in entries if e.sign == T]
    for e1 in true_entries:
        f, a = canonical_form(e1.term, e1.args)
        if not isinstance(f, Constant):
            continue
        for pos in range(1, len(a) + 1):
            direction = kb.monotonicity(f.lemma, pos)
            if direction not in (UP, DOWN):
                continue
            x = a[pos - 1]
            if not _is_property(x):
                continue
            for e2 in true_entries:
                if e2.id == e1.id:
                    continue
                g, b = canonical_form(e2.term, e2.args)
                if not isinstance(g, Constant) or len(b) != len(a):
                    continue
                y = b[pos - 1]
                if term_key(x) == term_key(y):
                    continue
                if type_of(x) != type_of(y) or not _is_property(y):
                    continue
                shared = all(
                    term_key(a[i]) == term_key(b[i])
                    for i in range(len(a)) if i != pos - 1
                )
                if not shared:
                    continue
                rule = UP_DIS_COV if direction == UP else DOWN_SUBST
                if direction == UP:
                    witness_branch = [(x, None, T), (y, None, F)]
                else:
                    witness_branch = [(y, None, T), (x, None, F)]
                new_a = a[: pos - 1] + (y,) + a[pos:]
                f_side = (Application(f, new_a[:-1]) if len(new_a) > 1 else f,
                          (new_a[-1],), T)
                g_side = (Application(g, b[:-1]) if len(b) > 1 else g,
                          (b[-1],), T)
                out.append(Candidate(
                    BRANCHING, e1.id, rule, (e1.id, e2.id),
                    [witness_branch, [f_side, g_side]],
                    witness=f"pos{pos}",
                    needs_fresh=True, fresh_slots=((0, 0), (0, 1)),
                ))
    return out
