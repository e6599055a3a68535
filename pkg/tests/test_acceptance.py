"""Acceptance suite: one test per release criterion, each printing a
pass/fail line.  Run with `pytest tests/test_acceptance.py -v -s`."""

import json
import time

from natlog.cli import main
from natlog.explain import extract_lexrels, extract_rules, extract_unlabeled, prune
from natlog.generator import generate_problems
from natlog.oracle import countermodel_search
from natlog.prover import NLIProblem, classify, parse_problem
from natlog.scoring import score_pair
from natlog.serialize import packaged_data_path


def report(number, description, ok):
    print(f"[acceptance] criterion {number} ({description}): "
          f"{'PASS' if ok else 'FAIL'}")
    assert ok, f"criterion {number}: {description}"


def node_set(node, acc=None):
    acc = acc if acc is not None else set()
    acc.update((text, sign) for text, sign in node["entries"])
    for child in node["children"]:
        node_set(child, acc)
    return acc


def leaf_count(node):
    return 1 if not node["children"] else sum(leaf_count(c) for c in node["children"])


def test_criterion_1_birds_contradiction(default_kb):
    start = time.perf_counter()
    result = classify(
        NLIProblem("birds", ("many birds hover high",), "few birds fly"), default_kb)
    elapsed = time.perf_counter() - start
    ok = result.label == "contradiction"
    pruned = prune(result.tableau)
    ok &= pruned.branch_count == 2
    tree = extract_unlabeled(result.tableau).jsonable()["tree"]
    ok &= node_set(tree) == {
        ("many birds hover high", "T"),
        ("few birds fly", "T"),
        ("c hover high", "T"),
        ("c fly", "F"),
        ("c hover", "T"),
        ("many birds fly", "T"),
    }
    ok &= leaf_count(tree) == 2
    rels = {(r.rel, r.lhs, r.rhs) for r in extract_lexrels(result.tableau)}
    ok &= rels == {("sub", "hover", "fly"), ("alt", "few", "many")}
    ok &= extract_rules(result.tableau).rules == {"upDisCov": 1, "adj_sub_T": 1}
    ok &= elapsed < 1.0
    report(1, "proportional-quantifier contradiction reproduction", ok)


def test_criterion_2_drugs_entailment(default_kb):
    start = time.perf_counter()
    premise = ("The drugs that slow down or halt Alzheimer's disease "
               "work best the earlier you administer them")
    hypothesis = "Alzheimer's disease is treated using drugs"
    result = classify(NLIProblem("drugs", (premise,), hypothesis), default_kb)
    elapsed = time.perf_counter() - start
    ok = result.label == "entailment"
    tab = result.tableau
    pruned = prune(tab)
    ok &= pruned.branch_count == 2
    ok &= {rec.rule for rec in tab.closures.values()} == {"frame_alt"}
    rels = {(r.rel, r.lhs, r.rhs, r.voices) for r in extract_lexrels(tab)}
    ok &= rels == {
        ("sub", "slow down", "treat", ("active", "passive")),
        ("sub", "halt", "treat", ("active", "passive")),
    }
    body = ("c work best the earlier you administer them", "T")
    ok &= body in {(tab.render_entry(e), e.sign) for e in tab.entries.values()}
    ok &= body not in node_set(extract_unlabeled(tab).jsonable()["tree"])
    ok &= elapsed < 1.0
    report(2, "relative-clause/passive entailment reproduction", ok)


def test_criterion_3_quantifier_rule_multiset(default_kb):
    result = classify(
        NLIProblem("notall", ("not all birds fly",), "some bird does not fly"),
        default_kb)
    ok = result.label == "entailment"
    explanation = extract_rules(result.tableau)
    ok &= explanation.lexrels == ()
    ok &= explanation.rules == {"neg": 2, "forall_F": 1, "exists_F": 1}
    report(3, "pure-quantifier entailment rule multiset", ok)


def test_criterion_4_soundness_suite(regression_kb):
    start = time.perf_counter()
    problems = generate_problems(20240817, 200)
    disagreements = []
    proved = 0
    for problem in problems:
        result = classify(problem, regression_kb)
        if result.label == "neutral":
            continue
        proved += 1
        premises, hypothesis = parse_problem(problem)
        model = countermodel_search(premises, hypothesis, result.label,
                                    regression_kb, 3)
        if model is not None:
            disagreements.append(problem.id)
    elapsed = time.perf_counter() - start
    ok = len(problems) >= 200 and proved > 0
    ok &= not disagreements
    ok &= elapsed < 60.0
    print(f"[acceptance]   ({proved} proved labels, "
          f"{len(disagreements)} countermodels, {elapsed:.1f}s)")
    report(4, "zero countermodels over 200 generated problems", ok)


def test_criterion_5_contradiction_symmetry(regression_corpus, regression_kb):
    ok = True
    checked = 0
    for problem in regression_corpus:
        if problem.gold != "contradiction":
            continue
        checked += 1
        ok &= classify(problem, regression_kb).label == "contradiction"
        swapped = NLIProblem(problem.id + "-swap", (problem.hypothesis,),
                             problem.premises[0])
        ok &= classify(swapped, regression_kb).label == "contradiction"
    ok &= checked > 0
    report(5, "contradiction symmetry on the regression corpus", ok)


def test_criterion_6_termination_and_determinism(
        tmp_path, regression_corpus_path, regression_kb_path):
    outs = []
    for name, jobs in (("serial", "1"), ("parallel", "2")):
        out = tmp_path / name
        rc = main(["prove", "--corpus", regression_corpus_path,
                   "--kb", regression_kb_path, "--out", str(out),
                   "--jobs", jobs])
        outs.append((rc, out))
    ok = all(rc == 0 for rc, _ in outs)
    records = [json.loads(line)
               for line in (outs[0][1] / "labels.jsonl").read_text().splitlines()[1:]]
    ok &= all(not rec["flags"]["budgetExhausted"]
              for rec in records if "label" in rec)
    first, second = outs[0][1], outs[1][1]
    names = sorted(p.relative_to(first) for p in first.rglob("*") if p.is_file())
    ok &= names == sorted(p.relative_to(second) for p in second.rglob("*") if p.is_file())
    for rel_path in names:
        ok &= (first / rel_path).read_bytes() == (second / rel_path).read_bytes()
    report(6, "corpus run halts; byte-identical serial/parallel outputs", ok)


def test_criterion_7_metric_sanity():
    ok = True
    for fmt in ("lexrel", "rules", "unlabeled", "full"):
        path = packaged_data_path(f"golden/{fmt}.jsonl")
        with open(path, encoding="utf-8") as fh:
            records = [json.loads(line) for line in fh]
        ok &= len(records) > 0
        for record in records:
            payload = {k: v for k, v in record.items() if k != "id"}
            score = score_pair(fmt, payload, json.loads(json.dumps(payload)))
            if fmt == "lexrel":
                ok &= score.f1 == 1.0 and score.precision == 1.0 and score.recall == 1.0
            else:
                ok &= score is True
    # Branch permutation must not break exact tree matching.
    with open(packaged_data_path("golden/unlabeled.jsonl"), encoding="utf-8") as fh:
        trees = [json.loads(line) for line in fh]
    for record in trees:
        payload = {k: v for k, v in record.items() if k != "id"}
        permuted = json.loads(json.dumps(payload))
        permuted["tree"]["children"].reverse()
        ok &= score_pair("unlabeled", payload, permuted) is True
    report(7, "gold-vs-gold scores 1.0; permuted branches still match", ok)
