import csv
import io
import json

import pytest

from interleavings.cli import EXIT_AUDIT, EXIT_INF, EXIT_OK, EXIT_PARSE, EXIT_REPRO, RunConfig, main
from interleavings.errors import ParseError


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_interleave_flow_interval():
    code, text = run("interleave", "--family", "flow", "--a", "interval:0,2", "--b", "empty")
    assert code == EXIT_OK
    d = json.loads(text)
    assert abs(d["value"] - 1.0) <= 1e-6 and d["lower"] <= 1.0 <= d["upper"]


def test_interleave_infinite_exits_2():
    code, text = run("interleave", "--family", "mult", "--a", "interval:0,2", "--b", "empty")
    assert code == EXIT_INF
    assert json.loads(text)["value"] == "inf"


def test_interleave_rectangles():
    code, text = run("interleave", "--family", "shift", "--a", "rect:0,0;2,2", "--b", "rect:1,0;3,2")
    assert code == EXIT_OK and json.loads(text)["value"] == pytest.approx(1.0)


@pytest.mark.parametrize("argv", [
    ("interleave", "--a", "interval:x,2", "--b", "empty"),
    ("interleave", "--a", "interval:0,2", "--b", "rect:0,0;1,1"),
    ("interleave", "--family", "direction", "--a", "rect:0,0;1,1", "--b", "empty"),
    ("nosuchcommand",),
    ("gh", "--x", "/nonexistent.csv", "--y", "/nonexistent.csv"),
])
def test_parse_errors_exit_1(argv):
    assert run(*argv)[0] == EXIT_PARSE


def test_gh_csv(tmp_path):
    x, y = tmp_path / "x.csv", tmp_path / "y.csv"
    x.write_text("0\n")
    y.write_text("0,2\n2,0\n")
    code, text = run("gh", "--x", str(x), "--y", str(y))
    assert code == EXIT_OK
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["gh", "altered_gh", "modified_gh"]
    assert [float(v) for v in rows[1]] == [1.0, 1.0, 1.0]


def test_audit_suites_clean():
    for suite in ("pseudometric", "monoidal", "lawvere"):
        code, text = run("audit", "--suite", suite)
        assert code == EXIT_OK, text
        assert "0 violations" in text


def test_stability_small(tmp_path):
    out = tmp_path / "stab.csv"
    code, text = run("stability", "--trials", "5", "--grid", "5", "--csv", str(out))
    assert code == EXIT_OK
    assert text.startswith("5/5 bound satisfied")
    assert out.read_text().startswith("trial,degree")


def test_twocat_generate_validate_distance(tmp_path):
    code, text = run("twocat", "--generate", "action", "--n", "4")
    assert code == EXIT_OK
    f = tmp_path / "c.txt"
    f.write_text(text)
    assert run("twocat", "--file", str(f), "--validate")[0] == EXIT_OK
    code, text = run("twocat", "--file", str(f), "--a", "o0", "--b", "o2")
    assert code == EXIT_OK
    assert list(csv.reader(io.StringIO(text)))[1] == ["o0", "o2", "2.0"]


def test_twocat_validate_flags_partial_category(tmp_path):
    f = tmp_path / "c.txt"
    f.write_text(run("twocat", "--generate", "cdelta", "--n", "3")[1])
    assert run("twocat", "--file", str(f), "--validate")[0] == EXIT_AUDIT


def test_reproduce_is_deterministic_and_reports_rectangle_gap():
    code1, text1 = run("reproduce")
    code2, text2 = run("reproduce")
    assert text1 == text2
    rows = list(csv.DictReader(io.StringIO(text1)))
    assert {r["example"] for r in rows if r["status"] == "FAIL"} == {"rect M1-M3 shift p=2"}
    assert code1 == EXIT_REPRO


def test_run_config_validation():
    with pytest.raises(ParseError):
        RunConfig("interleave", tol=0.0)
    with pytest.raises(ParseError):
        RunConfig("gh", caps={"pairs": -1})
