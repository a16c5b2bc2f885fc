from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from lensgrid.cli import data_dir, main, rat
from lensgrid.grid import parse_diagram

DATA = data_dir()


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_rat():
    from fractions import Fraction

    assert rat(Fraction(-2, 4)) == "-1/2" and rat(3) == "3/1"


def test_validate(capsys, tmp_path):
    code, out, _ = run(capsys, "validate", str(DATA / "g1.json"))
    assert code == 0 and out.startswith("valid")
    bad = tmp_path / "bad.json"
    bad.write_text('{"p": 4, "q": 2, "n": 1, "O": [[0, 0]], "X": [[1, 0]]}')
    code, out, _ = run(capsys, "validate", str(bad))
    assert code == 1 and "coprime" in out


def test_io_and_syntax_errors(capsys, tmp_path):
    code, _, err = run(capsys, "validate", str(tmp_path / "missing.json"))
    assert code == 2 and "cannot read" in err
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert run(capsys, "homology", str(broken))[0] == 2
    partial = tmp_path / "partial.json"
    partial.write_text('{"p": 5, "n": 1, "O": [[0, 0]], "X": [[3, 0]]}')
    assert run(capsys, "gradings", str(partial))[0] == 2


def test_homology_json(capsys):
    code, out, _ = run(capsys, "homology", str(DATA / "g1.json"), "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["components"] == 1 and obj["k"] == [1]
    assert [(r["spin"], r["maslov"], r["alexander"]) for r in obj["table"]] == [
        (0, "-2/5", ["-1/5"]), (1, "-2/5", ["-2/5"]), (2, "2/5", ["2/5"]), (3, "0/1", ["1/5"]), (4, "2/5", ["0/1"]),
    ]


def test_homology_checks(capsys):
    code, out, _ = run(capsys, "homology", str(DATA / "lb.json"), "--check", "d2")
    assert code == 0 and "d^2 = 0" in out and "degree laws: hold" in out
    code, out, _ = run(capsys, "homology", str(DATA / "g2.json"), "--check", "orientation")
    assert code == 0 and "bijection holds" in out


def test_homology_cap(capsys, monkeypatch):
    assert run(capsys, "homology", str(DATA / "lb.json"), "--cap", "5")[0] == 4
    monkeypatch.setenv("LENSGRID_CAP", "5")
    assert run(capsys, "homology", str(DATA / "lb.json"))[0] == 4


def test_gradings_formats(capsys):
    code, out, _ = run(capsys, "gradings", str(DATA / "g1.json"), "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "permutation,m,spin,maslov,alexander" and len(lines) == 6
    assert "0,4,0,-2/5,-1/5" in lines
    code, out, _ = run(capsys, "gradings", str(DATA / "lb.json"), "--format", "json")
    assert len(json.loads(out)["generators"]) == 32
    code, out, _ = run(capsys, "gradings", str(DATA / "lb.json"), "--alexander", "symmetric")
    assert code == 0 and "-1/2 -1/2" in out


def test_components(capsys):
    code, out, _ = run(capsys, "components", str(DATA / "trivial_l41.json"))
    assert code == 0 and "U_{1,2,1,0}" in out and "U_{1,0,1,2}" in out
    code, out, _ = run(capsys, "components", str(DATA / "lb.json"), "--format", "json")
    assert sorted(c["class"] for c in json.loads(out)["components"]) == [1, 3]


def test_lift_reverse_trivial(capsys, tmp_path):
    out_file = tmp_path / "lift.json"
    assert run(capsys, "lift", str(DATA / "g1.json"), "-o", str(out_file))[0] == 0
    L = parse_diagram(out_file.read_text())
    assert (L.p, L.n) == (1, 5)
    code, out, _ = run(capsys, "reverse", str(DATA / "g1.json"))
    assert parse_diagram(out).X == ((0, 0),)
    code, out, _ = run(capsys, "trivial", "--p", "4", "--q", "1", "--counts", "1,0,1,2")
    assert code == 0 and parse_diagram(out).n == 4
    assert run(capsys, "trivial", "--p", "4", "--q", "1", "--counts", "1,0")[0] == 2
    assert run(capsys, "trivial", "--p", "4", "--q", "2", "--counts", "1,0,0,0")[0] == 1


def test_move(capsys, tmp_path):
    stab = tmp_path / "stab.json"
    code, _, _ = run(capsys, "move", str(DATA / "lb.json"), "--op", "stabilize", "--family", "X", "--corner", "NE", "--marking", "1", "-o", str(stab))
    assert code == 0 and parse_diagram(stab.read_text()).n == 3
    code, out, _ = run(capsys, "move", str(DATA / "lb.json"), "--op", "cycle", "--axis", "row", "--shift", "1")
    assert code == 0
    inter = tmp_path / "inter.json"
    inter.write_text('{"p": 1, "q": 0, "n": 4, "O": [[0, 0], [1, 1], [3, 2], [2, 3]], "X": [[3, 0], [2, 1], [0, 2], [1, 3]]}')
    code, _, err = run(capsys, "move", str(inter), "--op", "commute", "--axis", "col", "--at", "0")
    assert code == 3 and "interleave" in err
    code, _, _ = run(capsys, "move", str(DATA / "lb.json"), "--op", "destabilize", "--cell", "0,0")
    assert code == 3
    assert run(capsys, "move", str(DATA / "lb.json"), "--op", "destabilize")[0] == 2


def test_homfly_commands(capsys, tmp_path):
    table = str(DATA / "homfly" / "l41_lift_table.json")
    code, out, _ = run(capsys, "homfly", "eval", str(DATA / "homfly" / "b22.json"), "--table", table)
    assert code == 0 and out.strip().splitlines()[-1].startswith("value: ")
    code, out, _ = run(capsys, "homfly", "eval", str(DATA / "homfly" / "b22.json"), "--symbolic")
    assert code == 0 and "value" not in out and out.count("U_{") == 6
    empty = tmp_path / "empty.json"
    empty.write_text("[]")
    code, out, _ = run(capsys, "homfly", "eval", str(DATA / "homfly" / "a22.json"), "--table", str(empty))
    assert code == 1 and "missing table entries" in out
    expr = tmp_path / "e.json"
    expr.write_text('{"p": 4, "terms": [{"symbol": [1, 3, 2, 2], "coeff": "a z"}]}')
    code, out, _ = run(capsys, "homfly", "reverse", str(expr))
    assert code == 0 and json.loads(out)["terms"][0]["render"] == "U_{1,3,2,2}"
    bad = tmp_path / "bad.json"
    bad.write_text('{"role": "+", "children": [{"symbol": [0, 1]}]}')
    assert run(capsys, "homfly", "eval", str(bad))[0] == 2


def test_reproduce_appendix(capsys, tmp_path):
    code, out, _ = run(capsys, "reproduce-appendix")
    assert code == 0 and "DIFF" not in out and "MISSING" not in out
    copy = tmp_path / "data"
    shutil.copytree(DATA, copy)
    (copy / "golden" / "g1.homology.json").write_text("{}\n")
    code, out, _ = run(capsys, "reproduce-appendix", "--data", str(copy))
    assert code == 1 and "DIFF    g1.homology.json" in out


def test_output_is_deterministic(capsys):
    first = run(capsys, "homology", str(DATA / "lb.json"), "--format", "csv")[1]
    second = run(capsys, "homology", str(DATA / "lb.json"), "--format", "csv")[1]
    assert first == second


@pytest.mark.skipif(shutil.which("lensgrid") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["lensgrid", "validate", str(DATA / "lb.json")], capture_output=True, text=True)
    assert res.returncode == 0


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "lensgrid.cli", "components", str(DATA / "g1.json")], capture_output=True, text=True)
    assert res.returncode == 0 and "U_{0,0,0,0,1}" in res.stdout
