import json
import os
import pathlib

import pytest

from natlog.cli import main
from natlog.serialize import packaged_data_path


def read_lines(path):
    return [json.loads(line) for line in pathlib.Path(path).read_text().splitlines()]


@pytest.fixture(scope="module")
def run_dir(tmp_path_factory, regression_corpus_path, regression_kb_path):
    out = tmp_path_factory.mktemp("prove")
    rc = main(["prove", "--corpus", regression_corpus_path,
               "--kb", regression_kb_path, "--out", str(out)])
    assert rc == 0
    return out


def test_prove_writes_config_header_and_labels(run_dir, regression_corpus):
    lines = read_lines(run_dir / "labels.jsonl")
    assert "config" in lines[0]
    assert lines[0]["config"]["budget"]["maxEntries"] == 500
    by_id = {rec["id"]: rec for rec in lines[1:]}
    for problem in regression_corpus:
        assert by_id[problem.id]["label"] == problem.gold
        assert by_id[problem.id]["millis"] is None  # timing opt-in only


def test_prove_emits_proofs_for_non_neutral(run_dir, regression_corpus):
    for problem in regression_corpus:
        proof = run_dir / "proofs" / f"{problem.id}.json"
        if problem.gold == "neutral":
            assert not proof.exists()
        else:
            payload = json.loads(proof.read_text())
            assert payload["problemId"] == problem.id
            assert payload["searchedRelation"] == problem.gold
            assert payload["config"]["kb"]
            # Machine and human node forms are both present.
            node = payload["nodes"][0]
            assert node["surface"]["pieces"] and node["rendered"]


def test_prove_ids_sorted_in_labels(run_dir):
    ids = [rec["id"] for rec in read_lines(run_dir / "labels.jsonl")[1:]]
    assert ids == sorted(ids)


def test_prove_unreadable_corpus_exits_1(tmp_path):
    assert main(["prove", "--corpus", str(tmp_path / "missing.jsonl"),
                 "--out", str(tmp_path / "out")]) == 1


def test_prove_parse_errors_isolated(tmp_path, regression_kb_path, capsys):
    corpus = tmp_path / "corpus.jsonl"
    corpus.write_text(
        '{"id": "ok", "premises": ["some birds fly"], "hypothesis": "some birds fly"}\n'
        '{"id": "bad", "premises": ["twas brillig"], "hypothesis": "some birds fly"}\n'
    )
    out = tmp_path / "out"
    rc = main(["prove", "--corpus", str(corpus), "--kb", regression_kb_path,
               "--out", str(out)])
    assert rc == 2
    lines = read_lines(out / "labels.jsonl")[1:]
    by_id = {rec["id"]: rec for rec in lines}
    assert by_id["bad"]["error"] == "parse"
    assert by_id["ok"]["label"] == "entailment"
    assert "bad" in capsys.readouterr().err


def test_empty_corpus(tmp_path, regression_kb_path):
    corpus = tmp_path / "empty.jsonl"
    corpus.write_text("")
    out = tmp_path / "out"
    assert main(["prove", "--corpus", str(corpus), "--kb", regression_kb_path,
                 "--out", str(out)]) == 0
    assert len(read_lines(out / "labels.jsonl")) == 1  # header only


def test_explain_all_formats(run_dir, tmp_path):
    proof = str(run_dir / "proofs" / "birds-proportional.json")
    for fmt in ("lexrel", "rules", "unlabeled", "full"):
        target = tmp_path / f"{fmt}.json"
        assert main(["explain", "--proof", proof, "--format", fmt,
                     "--out", str(target)]) == 0
        payload = json.loads(target.read_text())
        assert payload["problemId"] == "birds-proportional"
        assert payload["format"] == fmt
    rules_payload = json.loads((tmp_path / "rules.json").read_text())
    assert rules_payload["rules"] == {"adj_sub_T": 1, "upDisCov": 1}


def test_unknown_format_is_usage_error(run_dir, tmp_path):
    proof = str(run_dir / "proofs" / "birds-proportional.json")
    rc = main(["explain", "--proof", proof, "--format", "prose",
               "--out", str(tmp_path / "x.json")])
    assert rc == 64
    rc = main(["evaluate", "--gold", "x", "--sys", "y", "--format", "prose"])
    assert rc == 64


def test_evaluate_gold_vs_gold_and_figure(tmp_path, capsys):
    gold = packaged_data_path("golden/lexrel.jsonl")
    out = tmp_path / "score.json"
    figure = tmp_path / "score.png"
    rc = main(["evaluate", "--gold", gold, "--sys", gold, "--format", "lexrel",
               "--out", str(out), "--figure", str(figure)])
    assert rc == 0
    table = capsys.readouterr().out
    assert "macroF1" in table
    payload = json.loads(out.read_text())
    assert payload["aggregate"]["macroF1"] == 1.0
    assert payload["aggregate"]["exactMatch"] == 1.0
    assert figure.stat().st_size > 0


def test_evaluate_id_mismatch(tmp_path):
    a = tmp_path / "a.jsonl"
    b = tmp_path / "b.jsonl"
    a.write_text('{"id": "x", "lexrels": []}\n')
    b.write_text('{"id": "y", "lexrels": []}\n')
    assert main(["evaluate", "--gold", str(a), "--sys", str(b),
                 "--format", "lexrel"]) == 1


def test_oracle_check_agrees(run_dir, regression_corpus_path, regression_kb_path, capsys):
    rc = main(["oracle-check", "--corpus", regression_corpus_path,
               "--labels", str(run_dir / "labels.jsonl"),
               "--kb", regression_kb_path, "--max-size", "3"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["disagreements"] == []
    assert payload["abstained"] == []
    assert payload["checked"] == 11


def test_kb_env_var_default(tmp_path, regression_corpus_path, regression_kb_path,
                            monkeypatch):
    monkeypatch.setenv("NATLOG_KB", regression_kb_path)
    out = tmp_path / "out"
    assert main(["prove", "--corpus", regression_corpus_path,
                 "--out", str(out)]) == 0
    header = read_lines(out / "labels.jsonl")[0]
    assert header["config"]["kb"] == regression_kb_path


def test_runs_are_byte_identical(tmp_path, regression_corpus_path, regression_kb_path):
    outs = []
    for name, jobs in (("a", "1"), ("b", "2")):
        out = tmp_path / name
        assert main(["prove", "--corpus", regression_corpus_path,
                     "--kb", regression_kb_path, "--out", str(out),
                     "--jobs", jobs]) == 0
        outs.append(out)
    first, second = outs
    files_a = sorted(p.relative_to(first) for p in first.rglob("*") if p.is_file())
    files_b = sorted(p.relative_to(second) for p in second.rglob("*") if p.is_file())
    assert files_a == files_b
    for rel_path in files_a:
        assert (first / rel_path).read_bytes() == (second / rel_path).read_bytes(), rel_path


def test_evaluate_accepts_explain_output_directly(run_dir, tmp_path, capsys):
    # The explain subcommand keys records by problemId; evaluate accepts both.
    sys_file = tmp_path / "sys.jsonl"
    records = []
    for proof in sorted((run_dir / "proofs").glob("*.json")):
        target = tmp_path / "one.json"
        assert main(["explain", "--proof", str(proof), "--format", "rules",
                     "--out", str(target)]) == 0
        records.append(json.loads(target.read_text()))
    sys_file.write_text("".join(json.dumps(r) + "\n" for r in records))
    gold = packaged_data_path("golden/rules.jsonl")
    assert main(["evaluate", "--gold", gold, "--sys", str(sys_file),
                 "--format", "rules"]) == 0
    assert "exactMatch                  1.000" in capsys.readouterr().out
