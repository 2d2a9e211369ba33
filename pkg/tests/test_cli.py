"""Command-line behaviour: JSON shape, exit codes and golden reports."""

import io
import json
import os
from pathlib import Path

import pytest

from gpdef.cli import EXIT_INPUT, EXIT_MISMATCH, EXIT_OK, main

GOLDEN = Path(__file__).parent / "golden"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    text = out.getvalue()
    assert text.endswith("\n") and text.count("\n") == 1
    return code, json.loads(text), text


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("corpus")
    code, doc, _ = run("examples", "export", str(d))
    assert code == EXIT_OK
    assert "V03.mod" in doc["files"]
    return d


GOLDEN_CASES = {
    "module-V03-info": ["module", "{d}/V03.mod", "info"],
    "module-V02-udr": ["module", "{d}/V02.mod", "udr", "--max-order", "4"],
    "module-V00-syzygy": ["module", "{d}/V00.mod", "syzygy", "--n", "3"],
    "module-S3-udr": ["module", "{d}/S3.mod", "udr", "--max-order", "4"],
    "equiv-dual-numbers-level1": ["equiv", "check", "{d}/dual-numbers-omega1.bimod", "{d}/dual-numbers-id.bimod", "--level", "1"],
    "algebra-cm-free": ["algebra", "check", "{d}/cm-free.alg"],
}


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden_reports(files, name):
    argv = [a.format(d=files) for a in GOLDEN_CASES[name]]
    code, _, text = run(*argv)
    assert code == EXIT_OK
    path = GOLDEN / f"{name}.json"
    expected = path.read_text(encoding="utf-8")
    assert text == expected


def test_udr_on_string_module_file(files):
    code, doc, _ = run("module", str(files / "V02.mod"), "udr", "--max-order", "4")
    assert code == EXIT_OK
    assert doc["udr"]["ring"] == "consistent with k[t]/(t^2)"


def test_equiv_level_one_on_dual_numbers(files):
    code, doc, _ = run("equiv", "check", str(files / "dual-numbers-omega1.bimod"), str(files / "dual-numbers-id.bimod"), "--level", "1")
    assert code == EXIT_OK and doc["overall"] is True


def test_equiv_reports_failure_without_error(files):
    code, doc, _ = run("equiv", "check", str(files / "dual-numbers-omega2.bimod"), str(files / "dual-numbers-id.bimod"), "--level", "1")
    assert code == EXIT_OK and doc["overall"] is False


@pytest.mark.parametrize(
    "verb, key, value",
    [
        (["tangent"], "tangent_dimension", 1),
        (["stable-end"], "stable_end_dim", 1),
        (["ext", "--i", "1"], "ext_dim", 1),
        (["gproj"], "certificate", {"indecomposable": True, "projective": False, "stable_end_dim": 1, "totally_reflexive": "true"}),
    ],
)
def test_module_verbs(files, verb, key, value):
    code, doc, _ = run("module", str(files / "V12.mod"), *verb)
    assert code == EXIT_OK
    assert doc[key] == value


def test_ext_against_other_module(files, tmp_path):
    combined = tmp_path / "two.mod"
    a = (files / "V00.mod").read_text(encoding="utf-8")
    b = (files / "V24.mod").read_text(encoding="utf-8").split("\n\n", 1)[1]
    combined.write_text(a + "\n" + b, encoding="utf-8")
    code, doc, _ = run("module", str(combined), "--module", "V00", "ext", "--other", "V24", "--i", "1")
    assert code == EXIT_OK
    assert doc["other"] == "V24"


@pytest.mark.parametrize(
    "text, error",
    [
        ("algebra A { field Q; vertices v; arrows x: v -> w; }", "UndeclaredName"),
        ("algebra A { field Q vertices v; }", "DSLSyntaxError"),
        ("algebra A { field Q; vertices v; arrows x: v -> v; }", "NotFiniteDimensional"),
    ],
)
def test_input_errors_exit_two(tmp_path, text, error):
    f = tmp_path / "bad.alg"
    f.write_text(text, encoding="utf-8")
    code, doc, _ = run("algebra", "check", str(f))
    assert code == EXIT_INPUT
    assert doc["error"] == error
    if error != "NotFiniteDimensional":
        assert doc["file"] == str(f) and doc["line"] == 1


def test_missing_file_and_bad_usage(tmp_path):
    code, doc, _ = run("module", str(tmp_path / "nope.mod"), "info")
    assert code == EXIT_INPUT and "cannot read" in doc["message"]
    code, doc, _ = run("examples", "run")
    assert code == EXIT_INPUT


def test_lenbound_environment_override(files, monkeypatch):
    monkeypatch.setenv("GPDEF_LENBOUND", "5")
    code, doc, _ = run("algebra", "check", str(files / "nakayama.alg"))
    assert code == EXIT_INPUT and doc["error"] == "NotFiniteDimensional"
    monkeypatch.setenv("GPDEF_LENBOUND", "zero")
    code, doc, _ = run("algebra", "check", str(files / "dual-numbers.alg"))
    assert code == EXIT_INPUT


def test_examples_run_passing_entry_is_deterministic():
    code1, _, t1 = run("examples", "run", "--id", "ex36-gamma-s3", "--id", "self-equiv-l0")
    code2, _, t2 = run("examples", "run", "--id", "self-equiv-l0", "--id", "ex36-gamma-s3", "--workers", "1")
    assert code1 == code2 == EXIT_OK
    assert t1 == t2


def test_examples_run_reports_mismatch():
    code, doc, _ = run("examples", "run", "--id", "fig1-v03-obstruction")
    assert code == EXIT_MISMATCH
    m = doc["mismatches"]
    assert {x["claim"] for x in m} == {"obstructed_order", "udr"}
    assert all(set(x) == {"id", "claim", "expected", "actual", "provenance"} for x in m)


def test_examples_list():
    code, doc, _ = run("examples", "list")
    assert code == EXIT_OK
    assert len(doc["entries"]) == 10


def test_console_script_is_declared():
    text = (Path(__file__).parent.parent / "pyproject.toml").read_text(encoding="utf-8")
    assert 'gpdef = "gpdef.cli:main"' in text
    assert os.environ.get("GPDEF_LENBOUND") is None


def test_full_corpus_run_is_byte_identical():
    from gpdef.runner import dumps, run_entries

    first = dumps(run_entries(workers=4))
    second = dumps(run_entries(workers=1))
    assert first == second
