"""Refutation-based natural-logic prover with structured explanations."""

from .engine import Budget, saturate
from .grammar import FragmentParseError, FragmentSentence, parse
from .lexicon import KnowledgeBase, load_kb, parse_kb
from .prover import NLIProblem, ProofResult, classify
from .tableau import Tableau, check_closure, init_tableau

__all__ = [
    "Budget",
    "FragmentParseError",
    "FragmentSentence",
    "KnowledgeBase",
    "NLIProblem",
    "ProofResult",
    "Tableau",
    "check_closure",
    "classify",
    "init_tableau",
    "load_kb",
    "parse",
    "parse_kb",
    "saturate",
]
