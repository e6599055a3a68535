"""Command-line entry points.

    natlog prove        --corpus F --out DIR [--kb F] [--jobs N] [budgets]
    natlog explain      --proof F --format X --out F
    natlog evaluate     --gold F --sys F --format X [--out F] [--figure F]
    natlog oracle-check --corpus F --labels F [--kb F] [--max-size K]

Exit codes: 0 success; 1 unreadable input or failed check; 2 the corpus run
finished but some sentences fell outside the grammar; 64 usage error.

The knowledge base defaults to $NATLOG_KB, then to the packaged one.  Output
files are byte-identical across runs for identical inputs and configuration,
including parallel runs: problems are written ordered by id, and wall-clock
timings are only recorded on request.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import re
import sys

from .engine import Budget
from .explain import extract_full, extract_lexrels, extract_rules, extract_unlabeled
from .grammar import FragmentParseError
from .lexicon import KBError, load_kb
from .oracle import OracleUnsupported, countermodel_search
from .prover import NEUTRAL, classify, parse_problem
from .scoring import FORMATS, FULL, LEXREL, RULES, UNLABELED, ScoreReport, score_pair
from .serialize import (
    FormatError,
    dumps,
    dumps_line,
    load_corpus,
    load_jsonl,
    proof_to_json,
    resolve_kb_path,
    tableau_from_json,
)

USAGE_ERROR = 64


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit:
        return USAGE_ERROR
    try:
        return args.func(args)
    except (FileNotFoundError, PermissionError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (FormatError, KBError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser():
    parser = argparse.ArgumentParser(prog="natlog")
    sub = parser.add_subparsers(required=True)

    prove = sub.add_parser("prove", help="classify a corpus and emit proofs")
    prove.add_argument("--corpus", required=True)
    prove.add_argument("--kb")
    prove.add_argument("--out", required=True)
    prove.add_argument("--jobs", type=int, default=1)
    prove.add_argument("--budget-entries", type=int, default=500)
    prove.add_argument("--budget-entities", type=int, default=4)
    prove.add_argument("--budget-apps", type=int, default=2000)
    prove.add_argument("--record-timing", action="store_true")
    prove.set_defaults(func=cmd_prove)

    explain = sub.add_parser("explain", help="extract an explanation from a proof")
    explain.add_argument("--proof", required=True)
    explain.add_argument("--format", required=True)
    explain.add_argument("--out", required=True)
    explain.set_defaults(func=cmd_explain)

    evaluate = sub.add_parser("evaluate", help="score system explanations against gold")
    evaluate.add_argument("--gold", required=True)
    evaluate.add_argument("--sys", required=True)
    evaluate.add_argument("--format", required=True)
    evaluate.add_argument("--out")
    evaluate.add_argument("--figure")
    evaluate.set_defaults(func=cmd_evaluate)

    oracle = sub.add_parser("oracle-check", help="search countermodels for proved labels")
    oracle.add_argument("--corpus", required=True)
    oracle.add_argument("--labels", required=True)
    oracle.add_argument("--kb")
    oracle.add_argument("--max-size", type=int, default=3)
    oracle.add_argument("--out")
    oracle.set_defaults(func=cmd_oracle_check)
    return parser


# -- prove ----------------------------------------------------------------------

_POOL: dict = {}


def _pool_init(kb_path, budget, config, record_timing):
    _POOL["kb"] = load_kb(kb_path)
    _POOL["budget"] = budget
    _POOL["config"] = config
    _POOL["record_timing"] = record_timing


def _pool_run(problem):
    kb, budget = _POOL["kb"], _POOL["budget"]
    try:
        result = classify(problem, kb, budget)
    except FragmentParseError as exc:
        return {"id": problem.id, "error": "parse", "message": str(exc)}
    label_line = {
        "id": problem.id,
        "label": result.label,
        "flags": result.flags,
        "entries": result.entries,
        "millis": int(result.millis) if _POOL["record_timing"] else None,
    }
    proof = None
    if result.label != NEUTRAL:
        proof = proof_to_json(problem.id, result.searched, result.tableau, _POOL["config"])
    return {"id": problem.id, "label_line": label_line, "proof": proof}


def _safe_name(problem_id: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]", "_", problem_id)


def cmd_prove(args) -> int:
    kb_path = resolve_kb_path(args.kb)
    budget = Budget(args.budget_entries, args.budget_entities, args.budget_apps)
    # The echoed config covers everything that affects file content; the
    # parallelism degree is an execution detail and deliberately absent.
    config = {
        "budget": {
            "maxEntries": budget.max_entries,
            "maxFreshEntities": budget.max_fresh_entities,
            "maxRuleApplications": budget.max_rule_applications,
        },
        "kb": kb_path,
        "recordTiming": bool(args.record_timing),
    }
    problems = load_corpus(args.corpus)
    os.makedirs(args.out, exist_ok=True)
    proofs_dir = os.path.join(args.out, "proofs")
    os.makedirs(proofs_dir, exist_ok=True)

    if args.jobs > 1 and len(problems) > 1:
        with concurrent.futures.ProcessPoolExecutor(
            max_workers=args.jobs,
            initializer=_pool_init,
            initargs=(kb_path, budget, config, args.record_timing),
        ) as pool:
            results = list(pool.map(_pool_run, problems))
    else:
        _pool_init(kb_path, budget, config, args.record_timing)
        results = [_pool_run(p) for p in problems]

    results.sort(key=lambda r: r["id"])
    parse_errors = []
    with open(os.path.join(args.out, "labels.jsonl"), "w", encoding="utf-8") as fh:
        fh.write(dumps_line({"config": config}))
        for res in results:
            if "error" in res:
                parse_errors.append(res)
                fh.write(dumps_line({"id": res["id"], "error": res["error"],
                                     "message": res["message"]}))
            else:
                fh.write(dumps_line(res["label_line"]))
    for res in results:
        if res.get("proof") is not None:
            path = os.path.join(proofs_dir, f"{_safe_name(res['id'])}.json")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(dumps(res["proof"]))
    for res in parse_errors:
        print(f"parse error in {res['id']}: {res['message']}", file=sys.stderr)
    return 2 if parse_errors else 0


# -- explain --------------------------------------------------------------------

_EXTRACTORS = {
    LEXREL: lambda tab: {"lexrels": [r.jsonable() for r in extract_lexrels(tab)]},
    RULES: lambda tab: extract_rules(tab).jsonable(),
    UNLABELED: lambda tab: extract_unlabeled(tab).jsonable(),
    FULL: lambda tab: extract_full(tab).jsonable(),
}


def cmd_explain(args) -> int:
    if args.format not in FORMATS:
        print(f"usage error: unknown format {args.format!r} "
              f"(choose from {', '.join(FORMATS)})", file=sys.stderr)
        return USAGE_ERROR
    with open(args.proof, encoding="utf-8") as fh:
        payload = json.load(fh)
    tab = tableau_from_json(payload)
    body = _EXTRACTORS[args.format](tab)
    out = {"problemId": payload["problemId"], "format": args.format}
    out.update(body)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(dumps(out))
    return 0


# -- evaluate -------------------------------------------------------------------


def _load_explanations(path):
    out = {}
    for rec in load_jsonl(path):
        key = rec.get("id", rec.get("problemId"))
        if key is None:
            raise FormatError(f"{path}: explanation record without an id")
        out[key] = rec
    return out


def cmd_evaluate(args) -> int:
    if args.format not in FORMATS:
        print(f"usage error: unknown format {args.format!r} "
              f"(choose from {', '.join(FORMATS)})", file=sys.stderr)
        return USAGE_ERROR
    gold = _load_explanations(args.gold)
    sys_out = _load_explanations(args.sys)
    if set(gold) != set(sys_out):
        missing = sorted(set(gold) ^ set(sys_out))
        print(f"error: gold/system problem ids differ: {missing}", file=sys.stderr)
        return 1
    report = ScoreReport(args.format)
    for pid in sorted(gold):
        report.add(pid, score_pair(args.format, gold[pid], sys_out[pid]))
    sys.stdout.write(report.to_table())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
    if args.figure:
        from .report import write_score_figure

        write_score_figure(report, args.figure)
    return 0


# -- oracle-check ---------------------------------------------------------------


def cmd_oracle_check(args) -> int:
    kb = load_kb(resolve_kb_path(args.kb))
    problems = {p.id: p for p in load_corpus(args.corpus)}
    labels = [r for r in load_jsonl(args.labels) if "id" in r]
    disagreements = []
    abstained = []
    checked = 0
    for record in labels:
        label = record.get("label")
        if label not in ("entailment", "contradiction"):
            continue
        problem = problems.get(record["id"])
        if problem is None:
            continue
        premises, hypothesis = parse_problem(problem)
        try:
            model = countermodel_search(premises, hypothesis, label, kb, args.max_size)
        except OracleUnsupported as exc:
            abstained.append({"id": record["id"], "reason": str(exc)})
            continue
        checked += 1
        if model is not None:
            disagreements.append({
                "id": record["id"],
                "label": label,
                "countermodel": model.jsonable(),
            })
    report = {
        "maxSize": args.max_size,
        "checked": checked,
        "abstained": abstained,
        "disagreements": disagreements,
    }
    text = dumps(report)
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 1 if disagreements else 0


if __name__ == "__main__":
    sys.exit(main())
