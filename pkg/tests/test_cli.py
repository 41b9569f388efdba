import json

import pytest

from app.main import EXIT_INPUT, EXIT_OK, EXIT_PRECONDITION, run_subcommand


def _run(capsys, *argv: str) -> tuple[int, dict]:
    code = run_subcommand(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def _complex_file(tmp_path, payload: dict) -> str:
    path = tmp_path / "complex.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def test_power_of_a_shifted_line(tmp_path, capsys):
    src = _complex_file(tmp_path, {"ring": "Z", "ranks": {"2": 1}})
    code, out = _run(capsys, "power", "--kind", "sym", "--r", "2", "--json-in", src)
    assert code == EXIT_OK
    assert out == {"ring": "Z", "homology": {"4": "Z"}, "truncated_above": None}


def test_power_from_a_generator_flag(capsys):
    code, out = _run(capsys, "power", "--kind", "antisym", "--r", "2", "--degree", "0")
    assert code == EXIT_OK
    assert out["homology"] == {"0": "Z/2"}


def test_homology_of_a_json_complex(tmp_path, capsys):
    src = _complex_file(
        tmp_path,
        {"ring": "Z", "ranks": {"0": 1, "1": 1}, "d": {"1": {"rows": 1, "cols": 1, "entries": [["6"]]}}},
    )
    code, out = _run(capsys, "homology", "--json-in", src)
    assert code == EXIT_OK
    assert out["homology"] == {"0": "Z/6"}


def test_lsym_over_a_prime_field(capsys):
    code, out = _run(capsys, "lsym", "--ring", "Fp:2", "--degree", "1", "--weight-cutoff", "3")
    assert code == EXIT_OK
    assert out == {"ring": "Fp:2", "weights": {"0": {"0": "F_2"}, "1": {"1": "F_2"}}}


def test_infinitesimal_stub_of_fp(capsys):
    code, out = _run(capsys, "inf", "--preset", "Fp-over-Z", "--N", "3")
    assert code == EXIT_OK
    assert out["N"] == "3"
    assert out["graded"] == [{"0": "Z/2"}] * 3


def test_cotangent_of_a_hypersurface(capsys):
    code, out = _run(capsys, "cotangent", "--preset", "hypersurface-x2")
    assert code == EXIT_OK
    assert out["homology"] == {"0": "Z+Z/2", "1": "Z"}
    assert "kahler" in out


def test_derham_degree_cutoff_marks_the_levels(capsys):
    code, out = _run(capsys, "derham", "--preset", "x-over-Zx", "--N", "2", "--degree-cutoff", "0")
    assert code == EXIT_OK
    assert out["truncated_above"] == "0"
    assert out["graded"] == [{"0": "Z"}, {}]
    assert out["beilinson_static"] is True
    code, out = _run(capsys, "derham", "--preset", "x-over-Zx", "--N", "2")
    assert code == EXIT_OK
    assert out["truncated_above"] is None


def test_circle_and_its_bounds(capsys):
    code, out = _run(capsys, "circle")
    assert code == EXIT_OK
    assert out["comparison"]["passed"] is True
    code, out = _run(capsys, "circle", "--N", "1")
    assert code == EXIT_INPUT
    assert out["error"] == "InputError"


def test_crystallization_mode_of_crys_stub(capsys):
    code, out = _run(capsys, "crys-stub", "--preset", "Fp-over-Z", "--p", "3", "--N", "3")
    assert code == EXIT_OK
    assert [c["is_iso"] for c in out["comparisons"]] == [True, True, True, False]


def test_free_crystalline_mode_of_crys_stub(capsys):
    code, out = _run(capsys, "crys-stub", "--i", "1", "--rank", "2", "--N", "1")
    assert code == EXIT_OK
    assert out["graded"] == [{"0": "Z"}, {"0": "Z^2"}]


def test_out_flag_writes_the_same_document(tmp_path, capsys):
    target = tmp_path / "result.json"
    code, out = _run(capsys, "homology", "--degree", "3", "--rank", "2", "--out", str(target))
    assert code == EXIT_OK
    assert json.loads(target.read_text(encoding="utf-8")) == out


# errors


def test_malformed_json_exits_with_input_error(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    code, out = _run(capsys, "homology", "--json-in", str(path))
    assert code == EXIT_INPUT
    assert out["error"] == "InputError"


def test_schema_violation_exits_with_input_error(tmp_path, capsys):
    src = _complex_file(tmp_path, {"ring": "Z", "ranks": {"0": -1}})
    code, out = _run(capsys, "homology", "--json-in", src)
    assert code == EXIT_INPUT
    assert out["error"] == "ValidationError"


def test_non_connective_input_is_a_precondition_failure(capsys):
    code, out = _run(capsys, "power", "--r", "2", "--degree", "-1")
    assert code == EXIT_PRECONDITION
    assert out["error"] == "NonConnectiveError"


@pytest.mark.parametrize(
    "argv",
    [
        ["frobnicate"],
        [],
        ["power", "--r", "2"],
        ["power", "--kind", "cube", "--r", "2", "--degree", "0"],
        ["lsym", "--degree", "0", "--weight-cutoff", "-1"],
        ["inf", "--preset", "nope"],
        ["homology", "--ring", "Fp:6", "--degree", "0"],
        ["derham", "--preset", "Zx", "--degree-cutoff", "-1"],
    ],
)
def test_usage_errors_exit_with_input_error(capsys, argv):
    code, out = _run(capsys, *argv)
    assert code == EXIT_INPUT
    assert set(out) == {"error", "message"}


def test_metrics_prints_text(capsys):
    assert run_subcommand(["metrics"]) == EXIT_OK
    assert "derham_suite_cases_total" in capsys.readouterr().out


@pytest.mark.slow
def test_paper_suite_passes(capsys):
    code, out = _run(capsys, "paper-suite")
    assert code == EXIT_OK
    assert out["summary"]["ok"] is True
