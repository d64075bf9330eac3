import json
import os
import subprocess
import sys

import pytest

from xilab import cli, fincat, io, lsc
from xilab import presheaf as ps
from xilab import rgraph as rg
from xilab.errors import MalformedData


def run(argv, capsys):
    code = cli.run(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_presheaf_file_round_trip(tmp_path, delta1, A):
    path = tmp_path / "A.json"
    path.write_text(io.dumps(io.presheaf_to_raw(A)))
    assert io.presheaf_from_raw(io.load_json(path), delta1) == A


def test_tuple_elements_are_relabelled(delta1, A):
    S = ps.coproduct(A, A)[0]
    raw = json.loads(io.dumps(io.presheaf_to_raw(S)))
    assert ps.is_isomorphic(io.presheaf_from_raw(raw, delta1), S)


def test_map_and_graph_round_trips(delta1, q):
    f = rg.collapse()
    raw = json.loads(io.dumps(io.graph_map_to_raw(f)))
    assert io.graph_map_from_raw(raw) == f
    assert io.nattrans_from_raw(raw, delta1) == rg.map_to_nattrans(f)
    N = rg.map_to_nattrans(f)
    back = io.nattrans_from_raw(json.loads(io.dumps(io.nattrans_to_raw(N))), delta1)
    assert back == N
    G = rg.arrow()
    assert io.graph_from_raw(json.loads(io.dumps(io.graph_to_raw(G)))) == G


def test_probe_and_xi_formats(delta1):
    for P in lsc.enumerate_probes(delta1):
        assert io.probe_from_raw(io.probe_to_raw(P), delta1) == P
    raw = io.xi_to_raw(delta1)
    assert set(raw["names"]) == {"total@[0]", "diag@[1]", "loop@[1]", "total@[1]"}
    X = io.presheaf_from_raw(raw["presheaf"], delta1)
    assert ps.is_isomorphic(X, lsc.build_xi(delta1).presheaf)


def test_malformed_files(tmp_path, delta1):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(MalformedData):
        io.load_json(bad)
    with pytest.raises(MalformedData):
        io.presheaf_from_raw({"carrier": {}}, delta1)
    with pytest.raises(MalformedData):
        io.probe_from_raw({"[1]": "loop@[1]"}, delta1)
    with pytest.raises(MalformedData):
        io.graph_from_raw({"edges": []})


def test_xi_dot_picture(capsys):
    code, out, _ = run(["xi", "--category", "delta1", "--format", "dot"], capsys)
    assert code == 0
    node_lines = [l for l in out.splitlines() if l.strip().endswith(";") and "->" not in l]
    edge_lines = [l for l in out.splitlines() if "->" in l]
    assert len(node_lines) == 1 and len(edge_lines) == 2
    assert any('label="loop"' in l for l in edge_lines)
    assert any('label="non-loop"' in l for l in edge_lines)
    code, out, _ = run(["xi", "--category", "delta1", "--format", "dot", "--degenerate"], capsys)
    assert out.count("style=dotted") == 1


def test_census_terminal_exit_zero(capsys):
    code, out, _ = run(["census", "--category", "terminal"], capsys)
    assert code == 0 and "# seed: 0" in out and "result: PASS" in out


def test_calibration_command(capsys):
    code, out, _ = run(["rgraph", "calibration"], capsys)
    assert code == 0
    assert "kernel pair ≅ A + 1 + 1: True" in out
    assert "descent holds: False" in out


def test_check_failures_exit_one(capsys):
    assert run(["nonsingular", "--category", "delta1", "--map", "q"], capsys)[0] == 1
    assert run(["cartesian", "--category", "delta1", "--map", "q", "--probe", "leibniz"], capsys)[0] == 1
    assert run(["nonsingular", "--category", "delta1", "--map", "identity:A"], capsys)[0] == 0


def test_unsaturated_shell_check_fails(tmp_path, capsys):
    p = tmp_path / "diag.json"
    p.write_text(json.dumps({"[0]": ["total@[0]"], "[1]": ["diag@[1]", "total@[1]"]}))
    code, out, _ = run(["shell-check", "--category", "delta1", "--probe", str(p), "--samples", "4"], capsys)
    assert code == 1 and "functorial: FAILED" in out
    code, out, _ = run(["probes", "saturate", "--category", "delta1", "--probe", str(p)], capsys)
    assert code == 0 and "saturation: {[0]: total@[0]; [1]: diag@[1],loop@[1],total@[1]}" in out


def test_probe_intersection_command(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    a.write_text(json.dumps({"[0]": ["total@[0]"], "[1]": ["diag@[1]", "total@[1]"]}))
    b.write_text(json.dumps({"[0]": ["total@[0]"], "[1]": ["loop@[1]", "total@[1]"]}))
    code, out, _ = run(["probes", "intersect", "--category", "delta1", "--probe", str(a), "--probe", str(b)], capsys)
    assert code == 0 and "intersection: {[0]: total@[0]; [1]: total@[1]}" in out


def test_usage_errors_exit_two(capsys, tmp_path):
    with pytest.raises(SystemExit) as info:
        cli.run(["no-such-command"])
    assert info.value.code == 2
    assert run(["xi"], capsys)[0] == 2
    assert run(["xi", "--category", "nowhere.json"], capsys)[0] == 2
    assert run(["points", "--category", "delta1", "--format", "dot"], capsys)[0] == 2
    assert run(["probes", "intersect", "--category", "delta1", "--probe", "all"], capsys)[0] == 2


def test_internal_errors_exit_three(capsys, monkeypatch):
    from xilab.errors import InternalInvariantError

    def boom(*args, **kwargs):
        raise InternalInvariantError("broken")

    monkeypatch.setitem(cli.COMMANDS, "points", boom)
    code, _, err = run(["points", "--category", "delta1"], capsys)
    assert code == 3 and "broken" in err


def test_invalid_category_file(tmp_path, capsys):
    raw = fincat.raw_catalog("delta1")
    raw["composition"] = [e for e in raw["composition"] if e["g"] != "!"]
    p = tmp_path / "cat.json"
    p.write_text(json.dumps(raw))
    code, out, _ = run(["cat-validate", "--category", str(p), "--format", "json"], capsys)
    assert code == 1
    assert json.loads(out)["data"]["valid"] is False
    code, _, _ = run(["cat-validate", "--category", "delta1"], capsys)
    assert code == 0


def test_formats(capsys, tmp_path):
    code, out, _ = run(["census", "--category", "walking_arrow", "--format", "csv"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[2] == "# seed: 0" and lines[3].startswith("site,probe,saturated")
    code, out, _ = run(["points", "--category", "parallel_pair", "--format", "json", "--seed", "9"], capsys)
    data = json.loads(out)
    assert data["seed"] == 9 and data["data"]["count"] == 2
    target = tmp_path / "out.txt"
    code, out, _ = run(["colimit-identity", "--out", str(target)], capsys)
    assert code == 0 and out == "" and "agree=True" in target.read_text()


def test_graph_commands(capsys, tmp_path):
    g = tmp_path / "g.json"
    g.write_text(json.dumps({"nodes": [0, 1], "edges": [{"id": "a", "src": 0, "tgt": 1}, {"id": "l", "src": 1, "tgt": 1}]}))
    code, out, _ = run(["rgraph", "sigma", "--graph", str(g)], capsys)
    assert code == 0 and "a -> non-loop" in out and "l -> loop" in out
    code, out, _ = run(["rgraph", "leibniz", "--graph", str(g)], capsys)
    assert code == 0 and "Leibniz: False" in out
    u = tmp_path / "u.json"
    u.write_text(json.dumps({"nodes": [0, 1], "edges": ["a"]}))
    code, out, _ = run(["rgraph", "classify", "--graph", str(g), "--subgraph", str(u)], capsys)
    assert code == 1 and "non-loop edge a" in out
    u.write_text(json.dumps({"nodes": [0, 1], "edges": ["l"]}))
    code, out, _ = run(["rgraph", "classify", "--graph", str(g), "--subgraph", str(u)], capsys)
    assert code == 0 and "unique discrete-fiber classifying map: True" in out
    code, out, _ = run(["rgraph", "nonsingular"], capsys)
    assert code == 1 and "witness edge=a" in out
    code, out, _ = run(["rgraph", "sierpinski", "--bound", "2"], capsys)
    assert code == 0


def test_other_commands(capsys):
    assert run(["sigma", "--category", "delta1", "--presheaf", "A"], capsys)[0] == 0
    code, out, _ = run(["petit-hom", "--category", "delta1", "--presheaf", "L", "--target", "L"], capsys)
    assert code == 0 and "non-singular: 1" in out
    assert run(["coreflect", "--category", "delta1", "--map", "q"], capsys)[0] == 0
    assert run(["cat-catalog"], capsys)[0] == 0
    assert run(["probes", "enumerate", "--category", "parallel_pair"], capsys)[0] == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["xi", "--category", "delta1"],
        ["census", "--category", "delta1", "--format", "csv"],
        ["shell-check", "--category", "delta1", "--probe", "leibniz", "--seed", "3", "--samples", "5"],
        ["rgraph", "sierpinski", "--bound", "2", "--format", "json"],
    ],
)
def test_reports_are_byte_identical_across_runs(argv):
    outs = []
    for hashseed in ("1", "2"):
        env = dict(os.environ, PYTHONHASHSEED=hashseed)
        res = subprocess.run([sys.executable, "-m", "xilab.cli", *argv], capture_output=True, env=env)
        outs.append(res.stdout)
    assert outs[0] == outs[1] and outs[0]
