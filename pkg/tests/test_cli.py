import io
import json
import subprocess
import sys

import pytest

from shderived.cli import MAX_WORDS, SUITES, count_words, main
from shderived.corpus import sample_path, sample_text
from shderived.graded import basis_words
from shderived.specfile import parse_spec


def run(*argv):
    out = io.StringIO()
    status = main(list(argv), out=out)
    return status, out.getvalue()


def tiny():
    return str(sample_path("tiny.alg"))


@pytest.mark.parametrize("name", ["tiny.alg", "truncfree2.alg", "tri2.alg"])
def test_a_infinity_passes_on_the_corpus(name):
    status, text = run("verify", "--input", str(sample_path(name)), "--suite", "a-infinity")
    assert status == 0
    assert "[PASS] a-infinity" in text and text.endswith("status: pass\n")


def test_json_report_has_every_suite_with_cutoffs_and_witnesses():
    status, text = run("verify", "--input", tiny(), "--suite", "all", "--report", "json")
    doc = json.loads(text)
    assert status == 0 and doc["status"] == "pass"
    names = [r["suite"] for r in doc["suites"]]
    assert names[:3] == ["axioms", "deformation", "gauge-generator"]
    assert names[3:] == list(SUITES)
    for r in doc["suites"]:
        assert set(r) == {"suite", "status", "checks", "failures", "cutoffs", "witnesses",
                          "notes"}
        assert r["witnesses"] == []
    assert doc["options"] == {"maxArity": 5, "maxWordLen": 6, "tOrder": 3}
    _, alias = run("verify", "--input", tiny(), "--suite", "all", "--report", "json-like")
    assert alias == text


def corrupt(tmp_path, old, new):
    text = sample_text("tiny.alg")
    assert old in text
    path = tmp_path / "bad.alg"
    path.write_text(text.replace(old, new, 1), encoding="utf-8")
    return str(path)


def test_corrupted_product_fails_with_witness(tmp_path):
    path = corrupt(tmp_path, "g2 * g1 = 1 g2·g1", "g2 * g1 = -1 g2·g1")
    status, text = run("verify", "--input", path, "--report", "json")
    doc = json.loads(text)
    assert status == 1 and doc["status"] == "fail"
    # products of weight 2 vanish, so the sign change surfaces as a Leibniz failure of d
    failed = [r for r in doc["suites"] if r["status"] == "fail"]
    assert [r["suite"] for r in failed] == ["deformation"]
    w = failed[0]["witnesses"][0]
    assert w["lhs"] != w["rhs"]
    assert any("validation failed" in s for s in doc["skipped"])


def test_corrupted_deformation_fails_a_suite(tmp_path):
    # one changed entry leaves d1 no longer a derivation
    path = corrupt(tmp_path, "d1(g1) = 1 g2", "d1(g1) = 2 g2")
    status, text = run("verify", "--input", path)
    assert status == 1
    assert "witness" in text


def test_gauge_suite_reports_a_bad_generator(tmp_path):
    path = corrupt(tmp_path, "h1(g1·g1) = 2 g1·g1", "h1(g1·g1) = 1 g1·g1")
    status, text = run("verify", "--input", path, "--report", "json")
    assert status == 1
    failed = {r["suite"] for r in json.loads(text)["suites"] if r["status"] == "fail"}
    assert "gauge-generator" in failed


def test_usage_errors_exit_2(capsys):
    assert run("verify", "--input", tiny(), "--suite", "hopf")[0] == 2
    assert run("verify")[0] == 2
    assert run("verify", "--input", "/nonexistent/file.alg")[0] == 2
    assert run("verify", "--input", tiny(), "--jobs", "0")[0] == 2
    assert "cannot read" in capsys.readouterr().err


def test_syntax_error_exit_2_with_location(tmp_path, capsys):
    path = corrupt(tmp_path, "g1 * g2 = 1 g1·g2", "g1 * g2 = 1 g1·g3")
    status, text = run("verify", "--input", path)
    assert status == 2 and text == ""
    err = capsys.readouterr().err
    assert "line 12, column 13" in err and "unknown basis name" in err
    empty = tmp_path / "empty.alg"
    empty.write_text("", encoding="utf-8")
    assert run("verify", "--input", str(empty))[0] == 2


def test_resource_bounds_exit_2(capsys):
    assert run("verify", "--input", tiny(), "--max-word-len", "9")[0] == 2
    assert run("verify", "--input", tiny(), "--max-arity", "0")[0] == 2
    assert run("verify", "--input", tiny(), "--t-order", "99")[0] == 2


def test_word_count_bound_exit_2(tmp_path, capsys):
    gens = "\n".join(f"v{k} : 0" for k in range(6))
    path = tmp_path / "wide.alg"
    path.write_text(f"[generators]\n{gens}\n[product]\n", encoding="utf-8")
    basis = parse_spec(path.read_text(encoding="utf-8")).spec.basis
    assert count_words(basis, 7, None) > MAX_WORDS >= count_words(basis, 6, None)
    assert run("verify", "--input", str(path), "--max-word-len", "7")[0] == 2
    assert "exceed" in capsys.readouterr().err


def test_count_words_matches_enumeration():
    spec = parse_spec(sample_text("truncfree2.alg")).spec
    for n in range(1, 5):
        assert count_words(spec.basis, n, 3) == len(basis_words(spec.basis, n, max_weight=3))


def test_inapplicable_suite_is_a_usage_error(capsys):
    loday = str(sample_path("loday2.alg"))
    assert run("verify", "--input", loday, "--suite", "gauge")[0] == 2
    assert "does not apply" in capsys.readouterr().err
    status, text = run("verify", "--input", loday)
    assert status == 0 and "skipped: gauge skipped" in text


def test_exit_status_follows_the_report(tmp_path):
    for path in (tiny(), corrupt(tmp_path, "d1(g1) = 1 g2", "d1(g1) = 2 g2")):
        status, text = run("verify", "--input", path, "--report", "json")
        doc = json.loads(text)
        assert status == (0 if all(r["status"] == "pass" for r in doc["suites"]) else 1)


def test_runs_are_deterministic_and_jobs_do_not_change_output():
    path = str(sample_path("truncfree2.alg"))
    first = run("verify", "--input", path, "--max-word-len", "4", "--report", "json")
    second = run("verify", "--input", path, "--max-word-len", "4", "--report", "json")
    parallel = run("verify", "--input", path, "--max-word-len", "4", "--report", "json",
                   "--jobs", "3")
    assert first == second == parallel


def test_format_prints_the_canonical_file():
    status, text = run("format", "--input", tiny())
    assert status == 0
    assert text == parse_spec(sample_text("tiny.alg")).canonical()


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "shderived.cli", "verify", "--input", tiny(),
                           "--suite", "a-infinity"], capture_output=True, text=True)
    assert proc.returncode == 0 and "status: pass" in proc.stdout
