import asyncio
import json
from fractions import Fraction

import pytest

from app.core.errors import InputError
from app.core.metrics import render_engine_metrics
from app.services.suite import (
    SuiteCase,
    build_cases,
    canonical_json,
    diff_paths,
    digest,
    golden_path,
    load_golden,
    preset_names,
    run_suite,
    to_wire,
)
from app.services.suite.golden import PACKAGED_GOLDEN
from app.services.linalg import FgModule, Matrix, ZZ


def _write_golden(tmp_path, cases: dict):
    path = tmp_path / "golden.json"
    path.write_text(json.dumps({"cases": cases}), encoding="utf-8")
    return str(path)


def _boom():
    raise ArithmeticError("no luck")


SMALL_CASES = [
    SuiteCase("answer", "misc", "TRIVIAL", lambda: {"value": 42, "ok": True}),
    SuiteCase("labels", "misc", "DERIVED", lambda: [FgModule(ZZ, 1, (2,)).label]),
    SuiteCase("broken", "misc", "TRIVIAL", _boom),
]


# wire format


def test_to_wire_uses_decimal_strings():
    value = {1: [2, Fraction(1, 3), True, None], "x": (-5,)}
    assert to_wire(value) == {"1": ["2", "1/3", True, None], "x": ["-5"]}


def test_canonical_json_and_digest_ignore_key_order():
    a = {"b": 1, "a": {"y": 2, "x": 3}}
    b = {"a": {"x": 3, "y": 2}, "b": 1}
    assert canonical_json(a) == canonical_json(b)
    assert digest(a) == digest(b)
    assert digest(a) != digest({"b": 2, "a": {"y": 2, "x": 3}})


def test_to_wire_reads_payloads():
    m = Matrix.from_rows(ZZ, [[1, -2]])
    assert to_wire(m) == {"ring": "Z", "rows": "1", "cols": "2", "entries": [["1", "-2"]]}


def test_diff_paths_names_every_difference():
    expected = {"a": "1", "b": ["x", "y"], "c": {"d": "2"}}
    computed = {"a": "1", "b": ["x", "z"], "e": "3"}
    diff = diff_paths(expected, computed)
    assert len(diff) == 3
    assert diff[0].startswith("$.b[1]: expected \"y\"")
    assert any(line.startswith("$.c: expected") and line.endswith("missing") for line in diff)
    assert any(line.startswith("$.e: unexpected") for line in diff)
    assert diff_paths(expected, expected) == []


# golden files


def test_packaged_golden_covers_every_case(monkeypatch):
    from app.core.config import settings

    monkeypatch.setattr(settings, "suite_golden_path", "")
    golden = load_golden(PACKAGED_GOLDEN)
    assert {c.name for c in build_cases()} == set(golden)
    assert golden_path() == PACKAGED_GOLDEN


def test_case_names_are_unique():
    names = [c.name for c in build_cases()]
    assert len(names) == len(set(names))


@pytest.mark.parametrize(
    "content",
    ["not json", json.dumps([1, 2]), json.dumps({"cases": {"x": {"provenance": "PAPER"}}}),
     json.dumps({"cases": {"x": {"provenance": "GUESS", "value": 1}}})],
)
def test_malformed_golden_files(tmp_path, content):
    path = tmp_path / "golden.json"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(InputError):
        load_golden(path)


def test_missing_golden_file(tmp_path):
    with pytest.raises(InputError):
        load_golden(tmp_path / "absent.json")


def test_presets_are_listed():
    assert "Fp-over-Z" in preset_names()
    assert "filtered-circle" in preset_names()


# runner


def test_runner_reports_pass_fail_and_error(tmp_path):
    golden = _write_golden(
        tmp_path,
        {
            "answer": {"provenance": "TRIVIAL", "value": {"value": "42", "ok": True}},
            "labels": {"provenance": "DERIVED", "value": ["Z+Z/3"]},
            "broken": {"provenance": "TRIVIAL", "value": {}},
        },
    )
    report = asyncio.run(run_suite(golden, cases=SMALL_CASES))
    by_name = {c.name: c for c in report.cases}
    assert [c.name for c in report.cases] == ["answer", "broken", "labels"]
    assert by_name["answer"].status == "pass"
    assert by_name["answer"].digest == digest({"value": 42, "ok": True})
    assert by_name["labels"].status == "fail"
    assert by_name["labels"].diff == ['$[0]: expected "Z+Z/3", computed "Z+Z/2"']
    assert by_name["broken"].status == "error"
    assert "ArithmeticError" in by_name["broken"].error
    assert not report.ok
    assert report.summary()["failed"] == ["broken", "labels"]


def test_runner_flags_cases_without_golden_values(tmp_path):
    golden = _write_golden(tmp_path, {})
    report = asyncio.run(run_suite(golden, cases=SMALL_CASES[:1]))
    assert report.cases[0].status == "fail"
    assert report.cases[0].diff == ["no golden value for this case"]


def test_runner_only_filter_and_parallelism(tmp_path, monkeypatch):
    from app.core.config import settings

    monkeypatch.setattr(settings, "derham_threads", 3)
    golden = _write_golden(
        tmp_path, {"answer": {"provenance": "TRIVIAL", "value": {"value": "42", "ok": True}}}
    )
    report = asyncio.run(run_suite(golden, only=["answer"], cases=SMALL_CASES))
    assert report.ok
    assert [c.name for c in report.cases] == ["answer"]


def test_engine_metrics_render_after_a_run(tmp_path):
    golden = _write_golden(tmp_path, {})
    asyncio.run(run_suite(golden, cases=SMALL_CASES[:1]))
    body, content_type = render_engine_metrics()
    assert b"suite" in body
    assert content_type.startswith("text/plain")


@pytest.mark.slow
def test_full_suite_against_packaged_golden():
    report = asyncio.run(run_suite())
    assert report.failed == []
    assert report.ok
