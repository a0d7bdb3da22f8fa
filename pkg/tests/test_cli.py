"""The ty3 command line: exit codes, reports and report-diff."""

import json

import pytest

from ty3.cli import RunConfig, main, report_diff, run, summarize

FAST = ["--max-weight", "4", "--suite", "pbw,center,phi", "--k", "1"]


def verify(tmp_path, *extra, report="r.json"):
    path = tmp_path / report
    code = main(["verify", *FAST, "--cache-dir", str(tmp_path / "cache"), "--report", str(path), *extra])
    return code, json.loads(path.read_text()) if path.exists() else None


def test_clean_run(tmp_path, capsys):
    code, doc = verify(tmp_path)
    assert code == 0
    assert doc["version"] == "ty3-report/1"
    assert [s["suite"] for s in doc["suites"]] == ["pbw", "center", "phi"]
    assert doc["summary"] == summarize(doc["suites"], strict=False)
    assert doc["summary"]["total"] == sum(len(s["instances"]) for s in doc["suites"])
    assert doc["config"]["k"] == [1]
    out = capsys.readouterr().out
    assert "blocking failures 0" in out


def test_mutation_exits_one(tmp_path):
    code, doc = verify(tmp_path, "--mutate", "EQ:sdet")
    assert code == 1
    assert doc["summary"]["blocking_failures"] > 0


def test_gg_mutation(tmp_path):
    code = main(["verify", "--max-weight", "6", "--suite", "theorem11", "--mutate", "EQ:GG", "--no-cache"])
    assert code == 1


def test_bad_arguments(tmp_path, capsys):
    assert main(["verify", "--suite", "nope", "--no-cache"]) == 2
    assert main(["verify", "--max-weight", "0", "--no-cache"]) == 2
    with pytest.raises(SystemExit):
        main(["frobnicate"])


def test_unwritable_report(tmp_path):
    code = main(["verify", *FAST, "--no-cache", "--report", str(tmp_path / "missing" / "r.json")])
    assert code == 2


def test_reports_are_deterministic(tmp_path, capsys):
    _, a = verify(tmp_path, report="a.json")
    _, b = verify(tmp_path, "--jobs", "2", report="b.json")
    assert report_diff(a, b) == []
    assert main(["report-diff", str(tmp_path / "a.json"), str(tmp_path / "b.json")]) == 0
    assert "reports agree" in capsys.readouterr().out


def test_report_diff_spots_changes(tmp_path):
    _, a = verify(tmp_path, report="a.json")
    _, b = verify(tmp_path, "--mutate", "sdet", report="b.json")
    diffs = report_diff(a, b)
    assert any("sdet(" in d for d in diffs)
    assert main(["report-diff", str(tmp_path / "a.json"), str(tmp_path / "b.json")]) == 1


def test_strict_counts_skips():
    suites = [{"suite": "x", "instances": [{"id": "a", "status": "skipped-out-of-window", "key": {}}]}]
    assert summarize(suites, strict=False)["blocking_failures"] == 0
    assert summarize(suites, strict=True)["blocking_failures"] == 1


def test_build_tables_then_verify_uses_cache(tmp_path, capsys):
    assert main(["build-tables", "--max-weight", "4", "--cache-dir", str(tmp_path)]) == 0
    assert (tmp_path / "tables-N4.json").exists()
    cfg = RunConfig(max_weight=3, suites=["center"], ks=[1], cache_dir=str(tmp_path))
    assert run(cfg) == 0
    assert "warning" not in capsys.readouterr().out
