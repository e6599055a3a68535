"""Seeded sampling of fragment problems for the property suites.

The generator favours premise/hypothesis pairs that share vocabulary so that
a useful fraction of the sample is provable; everything it emits parses
within the fragment and is supported by the model checker.
"""

from __future__ import annotations

import random

from .prover import NLIProblem

_NOUNS = ["bird", "dog", "cat", "animal", "mouse"]
_NOUN_PLURALS = {"bird": "birds", "dog": "dogs", "cat": "cats",
                 "animal": "animals", "mouse": "mice"}
_VERBS = ["fly", "hover", "swim", "run", "move"]
_VERB_3SG = {"fly": "flies", "hover": "hovers", "swim": "swims",
             "run": "runs", "move": "moves"}
_DETS = ["some", "every", "all", "no", "many", "few", "a", "the"]
_SINGULAR_DETS = ("a", "every", "the")


def _sentence(rng: random.Random, noun: str, verb: str) -> str:
    det = rng.choice(_DETS)
    singular = det in ("a", "every", "the")
    noun_form = noun if det in _SINGULAR_DETS else _NOUN_PLURALS[noun]
    verb_form = _VERB_3SG[verb] if singular else verb
    shape = rng.randrange(6)
    if shape == 0:
        return f"not all {_NOUN_PLURALS[noun]} {verb}"
    if shape == 1:
        aux = "does" if singular else "do"
        return f"{det} {noun_form} {aux} not {verb}"
    if shape == 2 and verb == "hover":
        return f"{det} {noun_form} {verb_form} high"
    if shape == 3:
        other = rng.choice([v for v in _VERBS if v != verb])
        other_form = _VERB_3SG[other] if singular else other
        op = rng.choice(["and", "or"])
        return f"{det} {noun_form} {verb_form} {op} {other_form}"
    return f"{det} {noun_form} {verb_form}"


def generate_problems(seed: int, count: int) -> list:
    """Deterministic problem sample: same seed, same problems."""
    rng = random.Random(seed)
    problems = []
    for i in range(count):
        noun = rng.choice(_NOUNS)
        verb = rng.choice(_VERBS)
        premise = _sentence(rng, noun, verb)
        # Mostly shared vocabulary, occasionally fully unrelated.
        h_noun = noun if rng.random() < 0.8 else rng.choice(_NOUNS)
        h_verb = verb if rng.random() < 0.6 else rng.choice(_VERBS)
        hypothesis = _sentence(rng, h_noun, h_verb)
        problems.append(NLIProblem(f"gen-{seed}-{i:04d}", (premise,), hypothesis))
    return problems
