import io
import json
import subprocess
import sys

import pytest

from cli_corpus import ALL, FAILURES, SUCCESS, d
from tropglue import __version__
from tropglue import jsonio as J
from tropglue.cli import main, run


@pytest.mark.parametrize("name, argv, code", SUCCESS, ids=[s[0] for s in SUCCESS])
def test_success_corpus(name, argv, code):
    got, text = run(argv)
    assert got == code, text
    out = json.loads(text)
    assert out["op"] == argv[0] and out["version"] == __version__
    assert "error" not in out


@pytest.mark.parametrize("name, argv, code, err", FAILURES, ids=[f[0] for f in FAILURES])
def test_failure_corpus(name, argv, code, err):
    got, text = run(argv)
    assert got == code
    assert json.loads(text)["error"]["code"] == err


def body(argv):
    code, text = run(argv)
    assert code == 0, text
    return json.loads(text)


def test_documented_outputs():
    assert body(["balance", d("pants.json")])["ok"] is True
    m = body(["moduli", d("pants.json")])
    assert (m["dimension"], m["surjective"], m["components"]) == (2, True, 1)
    g = body(["glue", "--genus", "1", d("loop.json")])
    assert (g["k_gamma"], g["aut_order"]) == ("0", 2)
    assert body(["moduli", d("triangle_r3.json")])["components"] == "INFINITE"
    assert body(["continue", d("cut_plane.json"), "--path", "[[2,2]]", "--dir", "[0,1]"])["direction"] == [1, 1]
    loop = body(["continue", d("cut_plane.json"), "--path", "[[0,0],[1,1],[2,2]]", "--dir", "[1,0]"])
    assert loop["closed_loop"] and not loop["identity"]
    end = body(["end", d("orthant.json"), "--dir", "[0,2]"])["polyhedron"]
    assert end == {"dim": 1, "eqs": [], "ineqs": [{"normal": [1], "offset": "0"}]}
    solved = body(["solve", d("line.json"), "--points", d("line_points.json")])
    assert solved["total"] == 1 and solved["solutions"][0]["multiplicity"] == 1


def test_round_trips():
    J.graph_from_json(body(["mark", d("line.json"), "--edge", "E3", "--label", "p"])["graph"])
    c = J.curve_from_json(body(["localize", d("edge_curve.json"), "--vertex", "v1"])["curve"])
    assert list(c.positions) == ["v1"]
    for argv in (["complete", d("square.json"), "--stratum", "[0]"], ["end", d("orthant.json"), "--dir", "[1,1]"]):
        J.polyhedron_from_json(body(argv)["polyhedron"])
    for s in body(["solve", d("line.json"), "--points", d("line_points.json")])["solutions"]:
        J.curve_from_json(s["curve"])
    h = body(["hnf", d("matrix.json")])
    assert J.matrix_from_json(h["h"]).to_rows() == h["h"]


def test_rationals_are_strings():
    text = run(["solve", d("line.json"), "--points", d("line_points.json")])[1]
    assert "." not in text.replace("0.1.0", "").replace(".json", "")
    sol = json.loads(text)["solutions"][0]["curve"]
    assert all(isinstance(x, str) for p in sol["positions"].values() for x in p)


def test_deterministic_in_process(monkeypatch):
    for threads in ("1", "4"):
        monkeypatch.setenv("TROPGLUE_THREADS", threads)
        for _, argv, _ in ALL:
            assert run(argv) == run(argv)


def test_bad_thread_count(monkeypatch):
    monkeypatch.setenv("TROPGLUE_THREADS", "many")
    code, text = run(["solve", d("line.json"), "--points", d("line_points.json")])
    assert code == 1 and json.loads(text)["error"]["code"] == "MALFORMED"


def test_usage_errors():
    assert run(["nonsense"])[0] == 1
    assert run(["glue", d("loop.json")])[0] == 1  # missing --genus


def test_output_file_and_stdin(tmp_path, monkeypatch, capsys):
    out = tmp_path / "o.json"
    assert main(["genus", d("loop.json"), "-o", str(out)]) == 0
    assert json.loads(out.read_text())["genus"] == 1
    assert capsys.readouterr().out == ""
    monkeypatch.setattr(sys, "stdin", io.StringIO(open(d("pants.json")).read()))
    assert main(["genus", "-"]) == 0
    assert json.loads(capsys.readouterr().out)["genus"] == 0


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "tropglue", "cokernel", "[[2, 0], [0, 3]]"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["order"] == 6
