from __future__ import annotations

import json
from pathlib import Path

import pytest

from charstack import cli, scan
from charstack.problem import ProblemError, load_problem, locate
from charstack.strictness import PairReport

DEMO = Path(__file__).resolve().parents[1] / "problems" / "demo.json"

BASE = {
    "spec_version": 1,
    "group": {"kind": "SL", "n": 2},
    "elements": {
        "J": [["1", "1"], ["0", "1"]],
        "D": [["2", "0"], ["0", "1/2"]],
        "D4": [["4", "0"], ["0", "1/4"]],
        "R": [["0", "1"], ["-1", "0"]],
    },
    "presentations": {
        "torus": {"builtin": "surface", "genus": 1},
        "pt": {"builtin": "once_punctured_torus"},
        "free2": {"generators": ["x", "y"]},
    },
    "representations": {
        "rho": {"presentation": "pt", "images": {"a": "D", "b": "R"}},
    },
    "tasks": [],
}


def problem(tasks, **overrides) -> dict:
    data = json.loads(json.dumps(BASE))
    data["tasks"] = tasks
    data.update(overrides)
    return data


def write(tmp_path, data, name="p.json") -> str:
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data, indent=1))
    return str(path)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- success ----------------------------------------------------------------------

def test_table_row_for_jordan_pair(tmp_path, capsys):
    path = write(tmp_path, problem([{"kind": "classify_pair", "pair": ["J", "J"]}]))
    code, out, _ = run(capsys, "run", path, "--format", "table")
    assert code == 0
    assert "strict: NO (all 3 criteria)" in out
    assert "H^-1..H^2: 1 1 1 1" in out


def test_json_report_fields(tmp_path, capsys):
    path = write(tmp_path, problem([{"kind": "classify_pair", "name": "jj", "pair": ["J", "J"]}]))
    code, out, _ = run(capsys, "run", path)
    assert code == 0
    report = json.loads(out)
    assert report["tool"] == "charstack"
    assert len(report["input_sha256"]) == 64
    (rec,) = report["results"]
    assert rec["name"] == "jj" and rec["status"] == "ok"
    assert rec["result"]["strict"] is False


def test_noncommuting_without_requirement_is_reported(tmp_path, capsys):
    path = write(tmp_path, problem([{"kind": "classify_pair", "pair": ["D", "J"]}]))
    code, out, _ = run(capsys, "run", path)
    assert code == 0
    assert json.loads(out)["results"][0]["result"]["commuting"] is False


def test_demo_runs_clean(capsys):
    code, out, err = run(capsys, "run", str(DEMO), "--format", "table")
    assert code == 0, err
    assert "lefschetz: YES" in out


def test_leaf_task(tmp_path, capsys):
    path = write(tmp_path, problem([{"kind": "leaf", "representation": "rho", "lambdas": ["D4"]}]))
    code, out, _ = run(capsys, "run", path)
    assert code == 0
    assert json.loads(out)["results"][0]["result"]["h_dims"] == [0, 2, 0]


def test_leaf_task_with_inline_conjugator(tmp_path, capsys):
    data = problem([{"kind": "leaf", "representation": "rho", "lambdas": ["D4c"],
                     "conjugators": [[["1", "1"], ["0", "1"]]]}])
    data["elements"]["D4c"] = [["4", "-15/4"], ["0", "1/4"]]
    code, out, err = run(capsys, "run", write(tmp_path, data))
    assert code == 0, err
    assert json.loads(out)["results"][0]["result"]["h_dims"] == [0, 2, 0]


def test_timing_flag(tmp_path, capsys):
    path = write(tmp_path, problem([{"kind": "sphere", "m": 2}]))
    _, out, _ = run(capsys, "run", path, "--timing")
    assert "seconds" in json.loads(out)["results"][0]
    _, out, _ = run(capsys, "run", path)
    assert "seconds" not in json.loads(out)["results"][0]


# -- determinism ----------------------------------------------------------------------

def test_byte_identical_runs(capsys):
    _, first, _ = run(capsys, "run", str(DEMO))
    _, second, _ = run(capsys, "run", str(DEMO))
    _, parallel, _ = run(capsys, "run", str(DEMO), "--parallel")
    assert first == second == parallel


def test_scan_byte_identical(capsys):
    argv = ("scan", "--family", "polynomial_in", "--count", "8", "--seed", "5", "--group", "SL:3", "--pairs")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    assert json.loads(a)["criteria_agree_all"] is True


# -- exit code 2 -----------------------------------------------------------------------

def test_missing_file(tmp_path, capsys):
    code, _, err = run(capsys, "run", str(tmp_path / "nope.json"))
    assert code == 2
    assert "cannot read" in err


def test_invalid_json_reports_line(tmp_path, capsys):
    path = write(tmp_path, '{"spec_version": 1,\n "group": {"kind": "SL" "n": 2}}')
    code, _, err = run(capsys, "run", path)
    assert code == 2
    assert "line 2" in err


@pytest.mark.parametrize("mutate, fragment", [
    (lambda d: d.update(spec_version=2), "spec_version"),
    (lambda d: d["tasks"].append({"kind": "frobnicate"}), "tasks/0/kind"),
    (lambda d: d["tasks"].append({"kind": "classify_pair"}), "tasks/0"),
    (lambda d: d["elements"].update(X=[["1.5", "0"], ["0", "1"]]), "elements/X"),
    (lambda d: d["group"].update(kind="SO"), "group/kind"),
    (lambda d: d["tasks"].append({"kind": "classify_pair", "pair": ["J", "K"]}), "undefined element 'K'"),
    (lambda d: d["tasks"].append({"kind": "tangent", "representation": "sigma"}), "undefined representation"),
    (lambda d: d["representations"].update(s={"presentation": "nope", "trivial": True}), "undefined presentation"),
    (lambda d: d["representations"].update(s={"presentation": "torus", "images": {"a": "J"}}), "images must cover"),
    (lambda d: d["elements"].update(X=[["1"]]), "2x2"),
    (lambda d: d["presentations"].update(bad={"generators": ["a"], "relators": ["a b"]}), "unknown generator"),
    (lambda d: d.update(group={"kind": "SL", "n": 1}), "n >= 2"),
])
def test_schema_and_name_errors(tmp_path, capsys, mutate, fragment):
    data = problem([])
    mutate(data)
    code, _, err = run(capsys, "run", write(tmp_path, data))
    assert code == 2
    assert fragment in err
    assert "line " in err


def test_undefined_name_location(tmp_path):
    data = problem([{"kind": "classify_pair", "pair": ["J", "K"]}])
    text = json.dumps(data, indent=1)
    with pytest.raises(ProblemError) as info:
        load_problem(text)
    line = text.splitlines()[info.value.line - 1]
    assert '"K"' in line


def test_locate_nested():
    text = '{\n "a": [1,\n  {"b": 2}]\n}'
    assert locate(text, ["a", 1, "b"]) == (3, 9)
    assert locate(text, ["missing"]) == (1, 1)


def test_scan_bad_group(capsys):
    code, _, err = run(capsys, "scan", "--family", "diagonal", "--count", "1", "--seed", "0", "--group", "SO:3")
    assert code == 2
    assert "bad group" in err


def test_scan_unknown_family_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["scan", "--family", "nope", "--count", "1", "--seed", "0"])
    assert info.value.code == 2


# -- exit code 3 -----------------------------------------------------------------------

@pytest.mark.parametrize("task, error_type", [
    ({"kind": "classify_pair", "pair": ["D", "J"], "options": {"require_commuting": True}}, "NonCommutingPair"),
    ({"kind": "double_point_leaf", "pair": ["J", "J"]}, "NotStrictError"),
    ({"kind": "leaf", "representation": "rho", "lambdas": ["J"]}, "BoundaryClassMismatch"),
    ({"kind": "goldman", "representation": "free"}, "SurfaceError"),
    ({"kind": "tangent", "representation": "broken"}, "RelatorViolation"),
    ({"kind": "strict_scan", "family": "block_sl2", "count": 1, "seed": 0}, "ValueError"),
    ({"kind": "sphere", "m": 1, "element": "bad_det"}, "GroupError"),
])
def test_math_failures(tmp_path, capsys, task, error_type):
    data = problem([dict(task, name="bad"), {"kind": "sphere", "m": 1}])
    data["elements"]["bad_det"] = [["2", "0"], ["0", "1"]]
    data["representations"]["free"] = {"presentation": "free2", "trivial": True}
    data["representations"]["broken"] = {"presentation": "torus", "images": {"a1": "D", "b1": "J"}}
    code, out, err = run(capsys, "run", write(tmp_path, data))
    assert code == 3
    assert "task 0 (" in err and "'bad'" in err
    results = json.loads(out)["results"]
    assert results[0]["status"] == "error"
    assert results[0]["error"]["type"] == error_type
    # later tasks still run
    assert results[1]["status"] == "ok"


def test_table_shows_error(tmp_path, capsys):
    data = problem([{"kind": "double_point_leaf", "pair": ["J", "J"]}])
    code, out, _ = run(capsys, "run", write(tmp_path, data), "--format", "table")
    assert code == 3
    assert "error: NotStrictError" in out


# -- exit code 1 -----------------------------------------------------------------------

def test_scan_disagreement_exit(monkeypatch, capsys):
    def fake(l1, l2, check=True):
        return PairReport(True, (False, False), (False, False), True, False, True, (0, 0, 0, 0), 0, 0)
    monkeypatch.setattr(scan, "classify_pair", fake)
    code, _, err = run(capsys, "scan", "--family", "diagonal", "--count", "2", "--seed", "0")
    assert code == 1
    assert "disagree" in err
