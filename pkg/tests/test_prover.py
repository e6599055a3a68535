import pytest

from natlog.engine import Budget
from natlog.grammar import FragmentParseError
from natlog.prover import NLIProblem, classify, parse_problem
from natlog.oracle import countermodel_search


def test_regression_corpus_labels(regression_corpus, regression_kb):
    for problem in regression_corpus:
        result = classify(problem, regression_kb)
        assert result.label == problem.gold, problem.id


def test_proof_present_iff_not_neutral(regression_corpus, regression_kb):
    for problem in regression_corpus:
        result = classify(problem, regression_kb)
        if result.label == "neutral":
            assert result.proof is None
        else:
            assert result.proof is not None and result.proof.closed
            assert result.searched == result.label


def test_identity_is_entailment(prove, default_kb):
    result = prove("many birds fly", "many birds fly", default_kb)
    assert result.label == "entailment"
    assert not result.flags["unsatisfiablePremise"]


def test_unsatisfiable_premises_flagged(prove, regression_kb):
    result = prove(("all birds fly", "some birds do not fly"),
                   "many cats run", regression_kb)
    assert result.label == "entailment"
    assert result.flags["unsatisfiablePremise"]


def test_neutral_pair(prove, default_kb):
    result = prove("some birds fly", "all birds fly", default_kb)
    assert result.label == "neutral"
    assert not result.flags["budgetExhausted"]


def test_parse_failure_propagates(default_kb):
    with pytest.raises(FragmentParseError):
        classify(NLIProblem("bad", ("wugs wug",), "birds fly"), default_kb)


def test_empty_problem_rejected():
    with pytest.raises(ValueError):
        NLIProblem("empty", (), "birds fly")
    with pytest.raises(ValueError):
        NLIProblem("empty", ("birds fly",), "")


def test_contradiction_symmetry(regression_corpus, regression_kb):
    for problem in regression_corpus:
        if problem.gold != "contradiction":
            continue
        swapped = NLIProblem(problem.id + "-swap", (problem.hypothesis,),
                             problem.premises[0])
        assert classify(swapped, regression_kb).label == "contradiction", problem.id


def test_budget_monotonicity(regression_corpus, regression_kb):
    small = Budget(max_entries=250, max_fresh_entities=2, max_rule_applications=1000)
    large = Budget(max_entries=1000, max_fresh_entities=8, max_rule_applications=4000)
    for problem in regression_corpus:
        first = classify(problem, regression_kb, small).label
        second = classify(problem, regression_kb, large).label
        if first != "neutral":
            assert second == first, problem.id


def test_tight_budget_reports_exhaustion(prove, regression_kb):
    result = prove("not all birds fly", "some bird does not fly",
                   regression_kb, budget=Budget(max_entries=3))
    assert result.label == "neutral"
    assert result.flags["budgetExhausted"]


def test_proved_labels_have_no_countermodels(regression_corpus, regression_kb):
    for problem in regression_corpus:
        result = classify(problem, regression_kb)
        if result.label == "neutral":
            continue
        premises, hypothesis = parse_problem(problem)
        assert countermodel_search(premises, hypothesis, result.label,
                                   regression_kb, 3) is None, problem.id
