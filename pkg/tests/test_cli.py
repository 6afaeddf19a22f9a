import json
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import TABLE, report
from gkzcm import IntegerMatrix, MatrixValidationError
from gkzcm.cli import (
    RunConfig,
    emit_report,
    main,
    parse_ideal,
    parse_matrix,
    report_dict,
    run_table,
    validate_report,
)

QUICK = TABLE[:4]


def test_parse_matrix_examples():
    A = parse_matrix("0 1 2 2; 2 1 1 0")
    assert (A.d, A.n) == (2, 4)
    for text, violation in [("1 2; 3", "ragged"), ("1 -1", "pointed"), ("1 a", "token")]:
        with pytest.raises(MatrixValidationError) as err:
            parse_matrix(text)
        assert err.value.violation == violation


@settings(max_examples=50)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=1, max_size=3))
def test_print_parse_round_trip(rows):
    M = IntegerMatrix(rows, check=False)
    assert IntegerMatrix.parse(str(M), check=False) == M


def write(tmp_path, lines):
    path = tmp_path / "batch.txt"
    path.write_text("".join(line + "\n" for line in lines))
    return str(path)


def test_empty_batch(tmp_path):
    text, code = run_table(write(tmp_path, []), fmt="csv")
    assert code == 0
    assert text.strip().count("\n") == 0


def test_batch_with_invalid_row(tmp_path):
    text, code = run_table(write(tmp_path, [TABLE[0], "1 2; 3", TABLE[1]]))
    assert code == 1
    lines = text.splitlines()
    assert any("ragged" in line for line in lines)
    assert sum("error" in line for line in lines) == 1


def test_batch_skips_comments(tmp_path):
    text, code = run_table(write(tmp_path, ["# header", "", TABLE[0]]), fmt="csv")
    assert code == 0
    assert len(text.strip().splitlines()) == 2


def test_table_in_every_format(tmp_path):
    path = write(tmp_path, QUICK[:2])
    text, _ = run_table(path, fmt="markdown")
    assert "| CM | CM | CM |" in text
    data, _ = run_table(path, fmt="json")
    rows = json.loads(data)["rows"]
    assert [r["input"] for r in rows] == QUICK[:2]
    for r in rows:
        validate_report(r["report"])


def test_parallel_batch_is_identical(tmp_path):
    path = write(tmp_path, QUICK)
    serial, _ = run_table(path, fmt="csv", jobs=1)
    parallel, _ = run_table(path, fmt="csv", jobs=2)
    assert serial == parallel


def test_json_report_of_first_row():
    text = emit_report(report(TABLE[0]), "json")
    data = json.loads(text)
    assert data["verdicts"] == {"semigroup_ring": True, "groebner_deformation": True, "gkz": True}
    validate_report(data)


def test_markdown_report_of_third_row():
    assert "not CM | not CM | not CM" in emit_report(report(TABLE[2]), "markdown")


@pytest.mark.parametrize("fmt", ["text", "json", "csv", "markdown"])
def test_reports_are_deterministic(fmt):
    rep = report(TABLE[1])
    assert emit_report(rep, fmt) == emit_report(rep, fmt)


def test_csv_report_has_numbers():
    text = emit_report(report(TABLE[1]), "csv")
    header, row = text.strip().splitlines()
    assert "pd" in header and "depth" in header and "dim" in header
    assert "not CM" in row


def test_schema_rejects_extra_fields():
    import jsonschema

    data = report_dict(report(TABLE[0]))
    data["surprise"] = 1
    with pytest.raises(jsonschema.ValidationError):
        validate_report(data)


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(command="classify")
    with pytest.raises(ValueError):
        RunConfig(command="table", file="x", jobs=0)
    with pytest.raises(ValueError):
        RunConfig(command="nope", matrix="1 2")


def test_parse_ideal_infers_variables():
    I = parse_ideal("x10*x2 - x1^2, x2^3")
    assert I.ring.names == ("x1", "x2", "x10")


def test_main_exit_codes(capsys):
    assert main(["classify", "--matrix", TABLE[0], "--format", "json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["verdicts"]["gkz"] is True
    assert main(["classify", "--matrix", "1 2; 3"]) == 1
    assert "ragged" in capsys.readouterr().err


def test_subcommands(capsys):
    assert main(["toric", "--matrix", "1 2"]) == 0
    assert "d1^2 - d2" in capsys.readouterr().out
    assert main(["umbrella", "--matrix", "1 1 1 1; 0 1 2 3"]) == 0
    assert "1 2 3 4" in capsys.readouterr().out.replace(",", " ")
    assert main(["resolve", "--ideal", "x1, x2", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)


def test_console_script_keeps_stdout_clean(tmp_path):
    env = {"GKZCM_LOG": "info", "PATH": "/usr/bin:/bin"}
    proc = subprocess.run([sys.executable, "-m", "gkzcm", "table", "--file", write(tmp_path, [TABLE[0]]),
                           "--format", "csv"], capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1] == f"1,{TABLE[0]},CM,CM,CM,2,2,2,2,2,2,4,4,4"
    assert "row 1/1 done" in proc.stderr


def test_internal_error_exit_code(monkeypatch, capsys):
    import gkzcm.cli

    def boom(cfg):
        raise RuntimeError("boom")

    monkeypatch.setattr(gkzcm.cli, "execute", boom)
    assert main(["classify", "--matrix", TABLE[0]]) == 2
    assert "internal error" in capsys.readouterr().err


def test_umbrella_with_rational_weights(capsys):
    assert main(["umbrella", "--matrix", TABLE[0], "--weights", "1/2 1 3 1"]) == 0
    out = capsys.readouterr().out
    assert "{1,4}        covector (1/2 1/4)  top" in out
    assert main(["umbrella", "--matrix", "1 2", "--weights", "1 0"]) == 1
