import json

import pytest

from dsubh_bounds.cli.main import EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, main
from dsubh_bounds.config.settings import settings

pytestmark = pytest.mark.integration


def test_selftest_passes(capsys):
    """
    What it does:
    - Runs the plumbing checks and the corrupted-constant case through the CLI.

    Why it matters:
    - A verifier that cannot flag a rhs shrunk by 1e-6 proves nothing.
    """
    assert main(["selftest"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert "PASS corrupted constant is detected" in out


def test_verify_writes_reports(small_corpus, tmp_path, capsys):
    out = tmp_path / "reports"
    assert main(["verify", str(small_corpus), "--out", str(out)]) == EXIT_OK
    assert (out / "report.json").is_file()
    assert (out / "report.csv").is_file()
    assert (out / "sweep_curve-sweep.svg").is_file()
    assert "5 records" in capsys.readouterr().out


def test_scaled_rhs_is_a_violation(corpus_payload, json_file, tmp_path):
    corpus_payload["cases"][0]["rhs_scale"] = 1e-6
    path = json_file("corpus.json", corpus_payload)
    assert main(["verify", str(path), "--out", str(tmp_path / "out")]) == EXIT_VIOLATION
    report = json.loads((tmp_path / "out" / "report.json").read_text(encoding="utf-8"))
    first = report["records"][0]
    assert first["status"] == "violation"
    assert "rhs-scaled" in first["caveats"]


def test_missing_file_is_a_usage_error(tmp_path, capsys):
    assert main(["verify", str(tmp_path / "nope.json")]) == EXIT_USAGE
    assert "file not found" in capsys.readouterr().err


def test_bad_arguments_are_usage_errors(small_corpus):
    assert main([]) == EXIT_USAGE
    assert main(["verify", str(small_corpus), "--jobs", "0"]) == EXIT_USAGE
    assert main(["verify", str(small_corpus), "--tol", "-1"]) == EXIT_USAGE


def test_overrides_do_not_leak(small_corpus, tmp_path):
    before = settings.model_dump()
    main(["verify", str(small_corpus), "--out", str(tmp_path), "--tol", "0.5", "--seed", "9"])
    assert settings.model_dump() == before


def test_modulus_prints_csv(json_file, capsys):
    measure = json_file("seg.json", {"kind": "polyline_length", "vertices": [[0, 0], [1, 0]]})
    assert main(["modulus", str(measure), "--t", "0.5", "0.25"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "t,lower,upper,mode"
    assert lines[1].startswith("0.25,0.5,0.5,")
    assert lines[2].startswith("0.5,1,1,")


def test_modulus_collapses_repeated_radii(json_file, capsys):
    measure = json_file("seg.json", {"kind": "polyline_length", "vertices": [[0, 0], [1, 0]]})
    assert main(["modulus", str(measure), "--t", "0.5", "0.25", "0.5"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 3
    assert [line.split(",")[0] for line in lines[1:]] == ["0.25", "0.5"]


def test_content_writes_json(json_file, tmp_path):
    set_path = json_file("s.json", {"kind": "segment", "a": [0, 0], "b": [1, 0]})
    gauge = json_file("g.json", {"kind": "power", "p": 1, "normalized": True})
    out = tmp_path / "out"
    assert main(["content", str(set_path), str(gauge), "--out", str(out), "--resolution", "6"]) == 0
    payload = json.loads((out / "content.json").read_text(encoding="utf-8"))
    assert 1.0 - 1e-9 <= payload["upper"] <= 1.05
    assert payload["t"] == "inf"


def test_inadmissible_gauge_is_a_usage_error(json_file, tmp_path):
    set_path = json_file("s.json", {"kind": "segment", "a": [0, 0], "b": [1, 0]})
    gauge = json_file("g.json", {"kind": "power", "p": 0, "b": 1})
    assert main(["content", str(set_path), str(gauge), "--out", str(tmp_path)]) == EXIT_USAGE
