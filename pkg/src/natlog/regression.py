"""Shipped regression corpus plus generated property suites.

`run_regressions` executes every golden case (label, explanations in all
four formats, score-against-self) and the generated property suites
(soundness against the model checker, contradiction symmetry, determinism,
budget monotonicity) and reports each failure by case id.
"""

from __future__ import annotations

import json

from .engine import Budget
from .explain import extract_full, extract_lexrels, extract_rules, extract_unlabeled
from .generator import generate_problems
from .lexicon import load_kb
from .oracle import OracleUnsupported, countermodel_search
from .prover import NLIProblem, classify, parse_problem
from .scoring import score_pair
from .serialize import load_corpus, packaged_data_path, proof_to_json

GOLDEN_FORMATS = ("lexrel", "rules", "unlabeled", "full")


def _extract(fmt, tab):
    if fmt == "lexrel":
        return {"lexrels": [r.jsonable() for r in extract_lexrels(tab)]}
    if fmt == "rules":
        return extract_rules(tab).jsonable()
    if fmt == "unlabeled":
        return extract_unlabeled(tab).jsonable()
    return extract_full(tab).jsonable()


def load_golden(fmt: str) -> dict:
    path = packaged_data_path(f"golden/{fmt}.jsonl")
    out = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            rec = json.loads(line)
            out[rec.pop("id")] = rec
    return out


def run_regressions(seed: int = 20240817, count: int = 200, max_size: int = 3) -> dict:
    kb = load_kb(packaged_data_path("regression.tsv"))
    corpus = load_corpus(packaged_data_path("regression.jsonl"))
    failures = []

    def fail(case, why):
        failures.append({"case": case, "why": why})

    # Golden cases: label, explanations, self-scoring.
    golden = {fmt: load_golden(fmt) for fmt in GOLDEN_FORMATS}
    results = {}
    for problem in corpus:
        result = classify(problem, kb)
        results[problem.id] = result
        if result.label != problem.gold:
            fail(problem.id, f"label {result.label} != gold {problem.gold}")
            continue
        if result.label == "neutral":
            continue
        for fmt in GOLDEN_FORMATS:
            payload = json.loads(json.dumps(_extract(fmt, result.tableau)))
            expected = golden[fmt].get(problem.id)
            if payload != expected:
                fail(problem.id, f"{fmt} explanation drifted from golden file")
            score = score_pair(fmt, expected, payload)
            ok = score is True or getattr(score, "f1", None) == 1.0
            if not ok:
                fail(problem.id, f"{fmt} self-score below 1.0")

    # Contradiction symmetry, golden and generated alike.
    def check_symmetry(problem, label):
        if label != "contradiction" or len(problem.premises) != 1:
            return
        swapped = NLIProblem(problem.id + "-swap", (problem.hypothesis,),
                             problem.premises[0])
        if classify(swapped, kb).label != "contradiction":
            fail(problem.id, "contradiction did not survive swapping")

    for problem in corpus:
        check_symmetry(problem, results[problem.id].label)

    # Generated property suite: soundness against exhaustive model search.
    generated = generate_problems(seed, count)
    proved = 0
    for problem in generated:
        result = classify(problem, kb)
        if result.label == "neutral":
            continue
        proved += 1
        premises, hypothesis = parse_problem(problem)
        try:
            model = countermodel_search(premises, hypothesis, result.label, kb, max_size)
        except OracleUnsupported as exc:
            fail(problem.id, f"oracle abstained: {exc}")
            continue
        if model is not None:
            fail(problem.id, f"countermodel found for {result.label}: "
                             f"{model.jsonable()}")
        check_symmetry(problem, result.label)

    # Determinism: repeated runs serialize identically.
    for problem in corpus[:3]:
        result = results[problem.id]
        if result.tableau is None:
            continue
        again = classify(problem, kb)
        a = json.dumps(proof_to_json(problem.id, result.searched, result.tableau, {}),
                       sort_keys=True)
        b = json.dumps(proof_to_json(problem.id, again.searched, again.tableau, {}),
                       sort_keys=True)
        if a != b:
            fail(problem.id, "proof serialization differs between runs")

    # Budget monotonicity: a larger budget never flips a proved label.
    bigger = Budget(1000, 8, 4000)
    for problem in corpus:
        label = results[problem.id].label
        if label != "neutral" and classify(problem, kb, bigger).label != label:
            fail(problem.id, "label flipped under a larger budget")

    return {
        "cases": len(corpus),
        "generated": len(generated),
        "generatedProved": proved,
        "failures": failures,
        "ok": not failures,
    }


def main() -> int:
    report = run_regressions()
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0 if report["ok"] else 1


if __name__ == "__main__":
    raise SystemExit(main())
