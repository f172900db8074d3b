import json
import os
import subprocess
import sys

import pytest
from hypothesis import given, settings

from hypercop import cli
from hypercop.core import Graph, GraphError
from hypercop.generators import FamilySpec, cycle, generate, grid
from hypercop.io import ParseError, emit_dimacs, emit_edgelist, parse_dimacs, parse_edgelist, parse_graph

from .test_core import connected_graphs


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return _write


def run_json(capsys, *argv):
    code = cli.run([*argv, "--json"])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


# -- parsing --------------------------------------------------------------

def test_parse_examples():
    a = parse_edgelist("0 1\n1 2")
    b = parse_dimacs("p edge 3 2\ne 1 2\ne 2 3")
    assert a.edges() == b.edges() == [(0, 1), (1, 2)]
    assert list(b.labels) == [1, 2, 3]
    with pytest.raises(ParseError, match="line 1"):
        parse_edgelist("0 0")


def test_parse_labels_and_comments():
    g = parse_edgelist("# header\n10 30  # trailing\n\n30 20\n")
    assert list(g.labels) == [10, 20, 30]
    assert g.edges() == [(0, 2), (1, 2)]


@pytest.mark.parametrize(
    "text,line",
    [("0 1\n1 0", 2), ("0 1\nx y", 2), ("0 1 2", 1), ("", 0)],
)
def test_parse_edgelist_errors(text, line):
    with pytest.raises(ParseError) as exc:
        parse_edgelist(text)
    assert exc.value.line == line


@pytest.mark.parametrize(
    "text",
    [
        "e 1 2",
        "p edge 2 1\np edge 2 1\ne 1 2",
        "p edge 2 2\ne 1 2",
        "p edge 2 1\ne 1 3",
        "p edge 2 1\nq 1 2",
        "p cnf 2 1\ne 1 2",
    ],
)
def test_parse_dimacs_errors(text):
    with pytest.raises(ParseError):
        parse_dimacs(text)


def test_parse_disconnected():
    with pytest.raises(GraphError, match="not connected"):
        parse_edgelist("0 1\n2 3")


@settings(max_examples=40, deadline=None)
@given(connected_graphs(max_n=10))
def test_round_trip(g: Graph):
    if g.n < 2:
        return
    assert parse_graph(emit_edgelist(g), "edgelist").edges() == g.edges()
    assert parse_graph(emit_dimacs(g), "dimacs").edges() == g.edges()


def test_parse_graph_from_path(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("0 1\n")
    assert parse_graph(p).n == 2
    with pytest.raises(ValueError):
        parse_graph("0 1", "gml")


def test_marks_emitted_as_comments():
    text = emit_edgelist(generate(FamilySpec("subdivided_grid", (2,))))
    assert text.startswith("# a=0\n# b=")


# -- subcommands ----------------------------------------------------------

def test_approx_tree(capsys, write):
    path = write("t.txt", emit_edgelist(generate(FamilySpec("random_tree", (20,), 1))))
    code, rep = run_json(capsys, "approx", path)
    assert code == 0
    res = rep["result"]
    assert (res["alpha"], res["lower"], res["upper"]) == (1, "0", "784.5")
    assert res["method"] == "block-graph" and res["sieve_op"] == "sieve_approx"


def test_approx_clique(capsys, write):
    path = write("k.txt", "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n")
    code, rep = run_json(capsys, "approx", path)
    assert code == 0
    assert rep["result"]["delta"] == "0" and rep["result"]["method"] == "block-graph"


@pytest.mark.parametrize("flag", ["--wm", "--localized"])
def test_approx_variants(capsys, write, flag):
    path = write("g.txt", emit_edgelist(grid(4, 5)))
    code, rep = run_json(capsys, "approx", path, flag)
    assert code == 0
    lower, upper = (float(rep["result"][k]) for k in ("lower", "upper"))
    assert lower <= 3 <= upper  # grid 4x5 has delta* = 3


def test_approx_wm_refused(capsys, write):
    path = write("c5.txt", emit_edgelist(cycle(5)))
    assert cli.run(["approx", path, "--wm"]) == 2


def test_copwin_and_dismantle_c4(capsys, write):
    path = write("c4.txt", "0 1\n1 2\n2 3\n3 0\n")
    code, rep = run_json(capsys, "copwin", path, "--s", "1", "--sp", "1")
    assert code == 0 and rep["result"]["copwin"] is False
    code, rep = run_json(capsys, "dismantle", path, "--s", "1", "--sp", "1")
    assert code == 0 and rep["result"]["dismantlable"] is False


def test_dismantle_reports_order_and_bound(capsys, write):
    path = write("t.txt", emit_edgelist(generate(FamilySpec("random_tree", (9,), 4))))
    code, rep = run_json(capsys, "dismantle", path, "--s", "2", "--sp", "1", "--star")
    res = rep["result"]
    assert res["dismantlable"] and len(res["order"]) == 9
    assert res["hyperbolicity_bound"] == "368"  # trees are weakly modular


def test_exact_and_cap(capsys, write):
    path = write("c6.txt", emit_edgelist(cycle(6)))
    code, rep = run_json(capsys, "exact", path)
    assert code == 0 and rep["result"]["delta"] == "1"
    assert cli.run(["exact", path, "--cap", "5"]) == 2
    code, rep = run_json(capsys, "exact", path, "--cap", "5", "--force", "--threads", "2")
    assert code == 0 and rep["result"]["delta"] == "1"


def test_base_scan_census(capsys, write):
    path = write("c12.txt", emit_edgelist(cycle(12)))
    _, rep = run_json(capsys, "base", path, "--root", "3")
    assert rep["result"]["delta_u"] == "3" and rep["result"]["root"] == 3
    _, rep = run_json(capsys, "scan", path, "--radius", "3")
    assert rep["result"]["delta"] == "0"
    _, rep = run_json(capsys, "census", path)
    assert rep["result"]["mu_max"] == 5 and rep["result"]["interval_thinness"] == 6
    assert cli.run(["base", path, "--root", "99"]) == 1


def test_fill(capsys, write):
    path = write("g.txt", emit_edgelist(grid(3, 3)))
    loop = ",".join(map(str, [0, 1, 2, 5, 8, 7, 6, 3] * 2))
    code, rep = run_json(capsys, "fill", path, "--s", "3", "--sp", "2", "--loop", loop)
    assert code == 0
    res = rep["result"]
    assert res["valid"] and res["faces"] <= res["area_bound"] == 8
    assert cli.run(["fill", path, "--s", "2", "--sp", "1", "--loop", loop]) == 2
    assert cli.run(["fill", path, "--s", "3", "--sp", "2", "--loop", "0,8"]) == 1


def test_verify_order(capsys, write):
    path = write("p.txt", "0 1\n1 2\n")
    good = write("good.txt", "1\n0 1\n2 1\n")
    bad = write("bad.txt", "0\n2 0\n1 0\n")
    _, rep = run_json(capsys, "verify-order", path, "--order-file", good, "--s", "1", "--sp", "1")
    assert rep["result"]["valid"] is True
    _, rep = run_json(capsys, "verify-order", path, "--order-file", bad, "--s", "1", "--sp", "1")
    assert rep["result"]["valid"] is False and rep["result"]["violation"]["vertex"] == 2
    short = write("short.txt", "1\n0 1\n")
    assert cli.run(["verify-order", path, "--order-file", short, "--s", "1", "--sp", "1"]) == 1


def test_gen(capsys, tmp_path):
    assert cli.run(["gen", "cycle", "5"]) == 0
    assert capsys.readouterr().out == "0 1\n0 4\n1 2\n2 3\n3 4\n"
    out = tmp_path / "g.dimacs"
    assert cli.run(["gen", "random_tree", "6", "--seed", "3", "--format", "dimacs", "-o", str(out)]) == 0
    assert parse_graph(out, "dimacs").n == 6
    assert cli.run(["gen", "random_tree", "6"]) == 1


# -- report behaviour -----------------------------------------------------

def test_report_shape_and_determinism(capsys, write):
    path = write("g.txt", emit_edgelist(grid(3, 4)))
    cli.run(["approx", path, "--json"])
    first = capsys.readouterr().out
    cli.run(["approx", path, "--json"])
    assert capsys.readouterr().out == first
    rep = json.loads(first)
    assert list(rep) == ["schema", "tool", "version", "command", "input_sha256", "graph", "result"]
    assert rep["graph"] == {"n": 12, "m": 17, "diameter": 5}
    cli.run(["approx", path, "--json", "--timings"])
    assert "timings" in json.loads(capsys.readouterr().out)


def test_table_mode(capsys, write):
    path = write("c4.txt", "0 1\n1 2\n2 3\n3 0\n")
    assert cli.run(["copwin", path, "--s", "2", "--sp", "2"]) == 0
    rows = dict(line.split("\t") for line in capsys.readouterr().out.splitlines())
    assert rows["result.copwin"] == "True"
    assert rows["graph.n"] == "4"


def test_output_file_and_errors(capsys, write, tmp_path):
    path = write("c4.txt", "0 1\n1 2\n2 3\n3 0\n")
    out = tmp_path / "rep.json"
    assert cli.run(["census", path, "--json", "-o", str(out)]) == 0
    assert json.loads(out.read_text())["result"]["op"] == "metric_triangle_census"
    assert cli.run(["census", path, "-o", str(tmp_path / "missing" / "rep.json")]) == 1
    assert cli.run(["census", str(tmp_path / "nope.txt")]) == 1
    assert cli.run(["census", write("bad.txt", "0 0\n")]) == 1
    assert cli.run(["census", write("dis.txt", "0 1\n2 3\n")]) == 1
    with pytest.raises(SystemExit) as exc:
        cli.run(["census", path, "--bogus"])
    assert exc.value.code == 1


def test_env_threads(monkeypatch, capsys, write):
    monkeypatch.setenv("HYPERCOP_THREADS", "0")
    path = write("c6.txt", emit_edgelist(cycle(6)))
    code, rep = run_json(capsys, "exact", path)
    assert code == 0 and rep["result"]["delta"] == "1"


def test_module_entry_point(write):
    path = write("c4.txt", "0 1\n1 2\n2 3\n3 0\n")
    proc = subprocess.run(
        [sys.executable, "-m", "hypercop", "copwin", path, "--s", "1", "--sp", "1", "--json"],
        capture_output=True,
        text=True,
        env={**os.environ},
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["copwin"] is False
