"""Deterministic parser for a controlled English fragment.

Grammar (one clause per sentence):

    Sentence  := "not" "all" NBar VP          (wide-scope negation)
               | Det? NBar [that VP] VP       (quantified subject)
               | Proper VP                    (constant subject)
    NBar      := (Adj | Noun)* Noun
    VP        := VPUnit (("and"|"or") VP)?
    VPUnit    := ("do"|"does") "not" VPUnit
               | Adv Verb ...                 (pre-verbal modifier)
               | Verb (("and"|"or") Verb)? Adv? ObjNP?
               | "is"/"are" Participle ("using"|"by") ObliqueNP   (passive)
               | IdiomVP                      (opaque multiword predicate)
    ObjNP     := Proper | Noun                (constant, kind reading)
    ObliqueNP := (Adj | Noun)* Noun           (existentially quantified)
               | Proper                       (constant)

Determiners: a, some, every, all, no, few, many, the.  A bare-plural subject
or oblique receives a covert existential determiner.  "not all" parses as
negation over "all"; "does not VP" as negation over the VP.  Passive clauses
are voice-normalized: the underlying verb takes the patient first, so active
and passive occurrences align argument-for-argument; the clause keeps a
passive voice flag and surface template.

The lexicon is a finite table (no morphological guessing): every surface
form is listed with its lemma.  Anything outside the table or the grammar
raises FragmentParseError naming the first unmatched token.
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import (
    ACTIVE,
    E,
    FunType,
    N,
    PASSIVE,
    S,
    VP,
    Application,
    Constant,
    Slice,
    Term,
)

DET_TYPE = FunType((N, VP), S)
TRANS_TYPE = FunType((E,), VP)
VP_MOD_TYPE = FunType((VP,), VP)
N_MOD_TYPE = FunType((N,), N)
NEG_S_TYPE = FunType((S,), S)
NEG_VP_TYPE = FunType((VP,), VP)
CONN_VP_TYPE = FunType((VP, VP), VP)
RELCL_TYPE = FunType((N, VP), N)

EXISTENTIAL_DETS = ("a", "some", "the")
UNIVERSAL_DETS = ("every", "all")
ALL_DETS = ("a", "some", "every", "all", "no", "few", "many", "the")

# Surface form -> lemma tables.  Multiword keys are token tuples.
NOUNS = {
    "bird": "bird", "birds": "bird",
    "drug": "drug", "drugs": "drug",
    "dog": "dog", "dogs": "dog",
    "cat": "cat", "cats": "cat",
    "animal": "animal", "animals": "animal",
    "mouse": "mouse", "mice": "mouse",
    "idea": "idea", "ideas": "idea",
    "man": "man", "men": "man",
    "woman": "woman", "women": "woman",
    "disease": "disease", "diseases": "disease",
    "patient": "patient", "patients": "patient",
}

INTRANS_VERBS = {
    "fly": "fly", "flies": "fly",
    "hover": "hover", "hovers": "hover",
    "swim": "swim", "swims": "swim",
    "run": "run", "runs": "run",
    "move": "move", "moves": "move",
    "sleep": "sleep", "sleeps": "sleep",
    "bark": "bark", "barks": "bark",
    "work": "work", "works": "work",
}

TRANS_VERBS = {
    ("treat",): "treat", ("treats",): "treat",
    ("halt",): "halt", ("halts",): "halt",
    ("chase",): "chase", ("chases",): "chase",
    ("administer",): "administer", ("administers",): "administer",
    ("eat",): "eat", ("eats",): "eat",
    ("slow", "down"): "slow down", ("slows", "down"): "slow down",
}

PARTICIPLES = {
    "treated": "treat",
    "halted": "halt",
    "chased": "chase",
    "administered": "administer",
    "eaten": "eat",
}

ADJS = {"small": "small", "big": "big", "colorless": "colorless", "old": "old"}

ADVS = {
    "high": "high",
    "furiously": "furiously",
    "quickly": "quickly",
    "badly": "badly",
    "slowly": "slowly",
}

PROPER_NPS = {
    ("alzheimer's", "disease"): "Alzheimer's disease",
    ("aricept",): "Aricept",
    ("rex",): "Rex",
}

# Opaque multiword predicates: matched whole, never decomposed.
IDIOM_VPS = {
    ("work", "best", "the", "earlier", "you", "administer", "them"):
        "work best the earlier you administer them",
    ("works", "best", "the", "earlier", "you", "administer", "them"):
        "work best the earlier you administer them",
}


class FragmentParseError(Exception):
    def __init__(self, message: str, token: str | None = None, position: int | None = None):
        super().__init__(message)
        self.token = token
        self.position = position


@dataclass(frozen=True)
class Token:
    text: str
    start: int  # byte offset
    end: int

    @property
    def lower(self) -> str:
        return self.text.lower()


def tokenize(text: str) -> list:
    tokens = []
    byte_pos = 0
    for chunk in text.split(" "):
        if chunk:
            width = len(chunk.encode("utf-8"))
            tokens.append(Token(chunk, byte_pos, byte_pos + width))
            byte_pos += width + 1
        else:
            byte_pos += 1
    return tokens


@dataclass(frozen=True)
class FragmentSentence:
    text: str
    sid: int
    term: Term
    voice: str
    tokens: tuple


def parse(text: str, sid: int) -> FragmentSentence:
    """Parse one sentence of the fragment into an anchored term."""
    tokens = tokenize(text)
    if not tokens:
        raise FragmentParseError("empty sentence")
    p = _Parser(tokens, sid)
    term, voice = p.sentence()
    if not p.at_end():
        p.fail("unexpected trailing token")
    return FragmentSentence(text, sid, term, voice, tuple(tokens))


class _Parser:
    def __init__(self, tokens, sid):
        self.tokens = tokens
        self.sid = sid
        self.i = 0

    # -- plumbing ----------------------------------------------------------

    def at_end(self):
        return self.i >= len(self.tokens)

    def peek(self, offset=0):
        j = self.i + offset
        return self.tokens[j] if j < len(self.tokens) else None

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, why):
        tok = self.peek()
        if tok is None:
            raise FragmentParseError(f"{why}: sentence ended early")
        raise FragmentParseError(
            f"{why}: cannot match token {tok.text!r} at byte {tok.start}",
            token=tok.text,
            position=tok.start,
        )

    def anchor(self, tok: Token) -> Slice:
        return Slice(self.sid, tok.start, tok.end)

    def span(self, first: Token, last: Token) -> Slice:
        return Slice(self.sid, first.start, last.end)

    def _match_multi(self, table):
        """Longest multi-token match from the current position."""
        best = None
        for key, lemma in table.items():
            k = len(key)
            if self.i + k <= len(self.tokens) and tuple(
                t.lower for t in self.tokens[self.i : self.i + k]
            ) == key:
                if best is None or k > best[2]:
                    best = (lemma, self.span(self.tokens[self.i], self.tokens[self.i + k - 1]), k)
        return best

    # -- sentence ----------------------------------------------------------

    def sentence(self):
        tok = self.peek()
        if tok.lower == "not" and self.peek(1) is not None and self.peek(1).lower == "all":
            neg_tok = self.take()
            inner, voice = self.sentence()
            neg = Constant("not", NEG_S_TYPE, self.anchor(neg_tok))
            return Application(neg, (inner,)), voice
        proper = self._match_multi(PROPER_NPS)
        if proper is not None:
            lemma, anchor, k = proper
            self.i += k
            subj = Constant(lemma, E, anchor)
            vp, voice = self.vp(subject=subj)
            if voice == PASSIVE:
                return vp, voice  # passive clause already includes its subject
            return Application(vp, (subj,), order="suffix"), voice
        det_tok = None
        if tok.lower in ALL_DETS:
            det_tok = self.take()
        noun = self.nbar()
        if self.peek() is not None and self.peek().lower == "that":
            that_tok = self.take()
            rel_vp, _ = self.vp(subject=None)
            conj = Constant("and", RELCL_TYPE, self.anchor(that_tok))
            noun = Application(conj, (noun, rel_vp), order="infix")
        if det_tok is not None:
            det = Constant(det_tok.lower, DET_TYPE, self.anchor(det_tok))
        else:
            det = Constant("some", DET_TYPE, None)  # covert bare-plural determiner
        vp, voice = self.vp(subject=None)
        if voice == PASSIVE:
            self.fail("passive clause needs a constant subject")
        return Application(det, (noun, vp)), voice

    def nbar(self) -> Term:
        mods = []
        while True:
            tok = self.peek()
            if tok is None:
                self.fail("expected a noun")
            low = tok.lower
            if low in ADJS and self.peek(1) is not None:
                mods.append(Constant(ADJS[low], N_MOD_TYPE, self.anchor(self.take())))
            elif low in NOUNS and self.peek(1) is not None and self.peek(1).lower in NOUNS:
                mods.append(Constant(NOUNS[low], N_MOD_TYPE, self.anchor(self.take())))
            elif low in NOUNS:
                noun: Term = Constant(NOUNS[low], N, self.anchor(self.take()))
                break
            else:
                self.fail("expected a noun")
        for mod in reversed(mods):
            noun = Application(mod, (noun,))
        return noun

    # -- verb phrases --------------------------------------------------------

    def vp(self, subject):
        left, voice = self.vp_unit(subject)
        tok = self.peek()
        if tok is not None and tok.lower in ("and", "or") and voice == ACTIVE:
            op_tok = self.take()
            right, rvoice = self.vp(subject=None)
            if rvoice == PASSIVE:
                self.fail("cannot coordinate with a passive clause")
            lemma = "and" if op_tok.lower == "and" else "or"
            conn = Constant(lemma, CONN_VP_TYPE, self.anchor(op_tok))
            return Application(conn, (left, right), order="infix"), ACTIVE
        return left, voice

    def vp_unit(self, subject):
        idiom = self._match_multi(IDIOM_VPS)
        if idiom is not None:
            lemma, anchor, k = idiom
            self.i += k
            return Constant(lemma, VP, anchor), ACTIVE
        tok = self.peek()
        if tok is None:
            self.fail("expected a verb phrase")
        low = tok.lower
        if low in ("do", "does") and self.peek(1) is not None and self.peek(1).lower == "not":
            do_tok = self.take()
            not_tok = self.take()
            body, voice = self.vp_unit(subject=None)
            if voice == PASSIVE:
                self.fail("cannot negate a passive clause here")
            neg = Constant("not", NEG_VP_TYPE, self.span(do_tok, not_tok))
            return Application(neg, (body,)), ACTIVE
        if low in ("is", "are"):
            if subject is None:
                self.fail("passive clause needs a constant subject")
            return self.passive_clause(subject)
        if low in ADVS and self._is_verb_at(self.i + 1):
            adv_tok = self.take()
            body, _ = self.vp_unit(subject=None)
            mod = Constant(ADVS[adv_tok.lower], VP_MOD_TYPE, self.anchor(adv_tok))
            return Application(mod, (body,)), ACTIVE
        return self.verb_group(), ACTIVE

    def verb_group(self):
        first_token = self.peek()
        entries = [(None, *self.verb_word())]  # (op_tok, const, transitive)
        while (
            self.peek() is not None
            and self.peek().lower in ("and", "or")
            and self._is_verb_at(self.i + 1)
        ):
            op_tok = self.take()
            entries.append((op_tok, *self.verb_word()))
        adv = None
        if self.peek() is not None and self.peek().lower in ADVS:
            adv_tok = self.take()
            adv = Constant(ADVS[adv_tok.lower], VP_MOD_TYPE, self.anchor(adv_tok))
        obj = self.object_np()
        last_token = self.tokens[self.i - 1]
        units = []
        for op_tok, const, transitive in entries:
            term: Term
            if transitive:
                if obj is None:
                    self.fail(f"verb {const.lemma!r} needs an object")
                term = Application(const, (obj,))
            else:
                if obj is not None:
                    self.fail(f"verb {const.lemma!r} does not take an object")
                term = const
            if adv is not None:
                term = Application(adv, (term,), order="suffix")
            units.append((op_tok, term))
        term = units[0][1]
        for op_tok, unit in units[1:]:
            lemma = "and" if op_tok.lower == "and" else "or"
            conn = Constant(lemma, CONN_VP_TYPE, self.anchor(op_tok))
            # Shared-object coordination reads as one contiguous span.
            span = self.span(first_token, last_token)
            term = Application(conn, (term, unit), order="infix", pieces_override=(span,))
        return term

    def _is_verb_at(self, j):
        for key in list(TRANS_VERBS) + [(k,) for k in INTRANS_VERBS]:
            k = len(key)
            if j + k <= len(self.tokens) and tuple(
                t.lower for t in self.tokens[j : j + k]
            ) == tuple(key):
                return True
        return False

    def verb_word(self):
        multi = self._match_multi(TRANS_VERBS)
        if multi is not None:
            lemma, anchor, k = multi
            self.i += k
            return (Constant(lemma, TRANS_TYPE, anchor), True)
        tok = self.peek()
        if tok is not None and tok.lower in INTRANS_VERBS:
            t = self.take()
            return (Constant(INTRANS_VERBS[t.lower], VP, self.anchor(t)), False)
        self.fail("expected a verb")

    def object_np(self):
        tok = self.peek()
        if tok is None:
            return None
        proper = self._match_multi(PROPER_NPS)
        if proper is not None:
            lemma, anchor, k = proper
            self.i += k
            return Constant(lemma, E, anchor)
        if tok.lower in NOUNS:
            t = self.take()
            return Constant(NOUNS[t.lower], E, self.anchor(t))  # kind reading
        return None

    def passive_clause(self, subject: Constant):
        self.take()  # is / are
        tok = self.peek()
        if tok is None or tok.lower not in PARTICIPLES:
            self.fail("expected a passive participle")
        part_tok = self.take()
        lemma = PARTICIPLES[part_tok.lower]
        marker = self.peek()
        if marker is None or marker.lower not in ("using", "by"):
            self.fail("expected 'using' or 'by' after the participle")
        marker_tok = self.take()
        verb = Constant(lemma, TRANS_TYPE, self.anchor(part_tok), voice=PASSIVE)
        # Patient-first application keeps active and passive frames aligned.
        template = Slice(self.sid, subject.anchor.start, marker_tok.end)
        vp = Application(verb, (subject,), pieces_override=(template,))
        nxt = self.peek()
        if nxt is None:
            self.fail("expected an agent noun phrase")
        proper = self._match_multi(PROPER_NPS)
        if proper is not None:
            p_lemma, p_anchor, k = proper
            self.i += k
            agent = Constant(p_lemma, E, p_anchor)
            return Application(vp, (agent,)), PASSIVE
        if nxt.lower in ALL_DETS:
            self.fail("quantified determiners are not supported in agent position")
        noun = self.nbar()
        det = Constant("some", DET_TYPE, None, ACTIVE, oblique=True)
        return Application(det, (noun, vp)), PASSIVE
