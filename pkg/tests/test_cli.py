import json

import pytest

from cyclocover.cli import EXIT_BOUNDS, EXIT_BUDGET, EXIT_EXACT, EXIT_RECHECK, EXIT_USAGE, _exit_for, main
from cyclocover.criteria import HqResult
from test_polyring import PAPER_F11


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_factor_signed_3_11(capsys):
    code, out, _ = run(capsys, "factor", "-q", "3", "-n", "11", "--signed", "--quiet")
    assert code == EXIT_EXACT
    for f in PAPER_F11.values():
        assert f in out


def test_factor_formats(capsys):
    code, out, _ = run(capsys, "factor", "-q", "3", "-n", "16", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("index,factor") and len(lines) == 8
    code, out, _ = run(capsys, "factor", "-q", "2", "-n", "1", "--format", "json")
    assert code == 0 and "x + 1" in out
    code, out, _ = run(capsys, "factor", "-q", "2", "-n", "1")
    assert "x + 1" in out


def test_hq_and_recheck_round_trip(capsys, tmp_path):
    path = tmp_path / "h.json"
    code, out, _ = run(capsys, "hq", "-q", "4", "-n", "4", "--quiet", "-o", str(path))
    assert code == EXIT_EXACT
    assert out.startswith("h_4(4) = 0 [qm_reduction from h_2(8)=0]")
    obj = json.loads(path.read_text())
    assert obj["status"] == "exact" and obj["lo"] == obj["hi"] == 0
    code, out, _ = run(capsys, "recheck", str(path))
    assert code == EXIT_EXACT and out.strip().endswith("recheck: pass")
    obj["lo"] = obj["hi"] = 1
    path.write_text(json.dumps(obj))
    code, out, _ = run(capsys, "recheck", str(path))
    assert code == EXIT_RECHECK


def test_hq_primitive_root(capsys):
    code, out, _ = run(capsys, "hq", "-q", "3", "-n", "17", "--quiet")
    assert code == 0 and out.startswith("h_3(17) = 0 [primitive root]")


def test_single_certificate_recheck(capsys, tmp_path):
    code, out, _ = run(capsys, "hq", "-q", "3", "-n", "8", "--quiet", "--format", "json")
    obj = json.loads(out)
    wit = next(c for c in obj["certificates"] if c["kind"] == "covering_witness")
    p = tmp_path / "w.json"
    p.write_text(json.dumps(wit))
    assert run(capsys, "recheck", str(p))[0] == EXIT_EXACT
    wit["duals"] = [[1] * 8]
    wit["basis"] = [[1 if j == i else (2 if j == 7 else 0) for j in range(8)] for i in range(7)]
    p.write_text(json.dumps(wit))
    assert run(capsys, "recheck", str(p))[0] == EXIT_RECHECK


@pytest.mark.parametrize(
    "argv",
    [
        ["hq", "-q", "6", "-n", "3"],
        ["hq", "-q", "3", "-n", "0"],
        ["factor", "-q", "3"],
        ["bogus"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_USAGE


def test_malformed_recheck_input(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert run(capsys, "recheck", str(p))[0] == EXIT_USAGE
    p.write_text(json.dumps({"kind": "nonsense"}))
    assert run(capsys, "recheck", str(p))[0] == EXIT_USAGE
    assert run(capsys, "recheck", str(tmp_path / "missing.json"))[0] == EXIT_USAGE


def test_budget_exit(capsys):
    code, out, _ = run(capsys, "hq", "-q", "2", "-n", "22", "--budget", "1000", "--quiet")
    assert code == EXIT_BUDGET
    assert out.startswith("2 <= h_2(22) <= 4")


def test_bounds_exit_code():
    r = HqResult.bounds(2, 18, 3, 4, [], [])
    assert _exit_for(r) == EXIT_BOUNDS
    r.budget_limited = True
    assert _exit_for(r) == EXIT_BUDGET


def test_table_csv(capsys):
    code, out, _ = run(capsys, "table", "-q", "2", "--from", "1", "--to", "6", "--quiet", "--format", "csv")
    assert code == 0
    rows = [line.split(",") for line in out.strip().splitlines()[1:]]
    assert [int(r[1]) for r in rows] == [0, 0, 1, 0, 2, 2]
