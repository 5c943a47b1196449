import json
import subprocess
import sys
from pathlib import Path

import pytest

from reebforge.cli import main
from reebforge.fuzz import Bounds, random_graph
from reebforge.graph_model import has_good_function, parse_graph, validate

FIXTURES = Path(__file__).parent / "fixtures"
PATH = str(FIXTURES / "path.graph")
LOOP = str(FIXTURES / "loop.graph")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_path(capsys):
    code, out, _ = run(capsys, "verify", PATH)
    report = json.loads(out)
    assert code == 0
    assert all(report[k] for k in ("property1", "property2", "property3", "chi_zero"))


def test_check_loop(capsys):
    code, out, _ = run(capsys, "check", LOOP)
    assert code == 1
    assert "no good function: loop present" in out


def test_check_ok(capsys):
    code, out, _ = run(capsys, "check", PATH)
    assert code == 0 and out.startswith("ok")


def test_verify_loop_fails(capsys):
    code, _, err = run(capsys, "verify", LOOP)
    assert code == 1
    assert "LoopPresent" in err


def test_parse_error_exit_two(capsys, tmp_path):
    bad = tmp_path / "bad.graph"
    bad.write_text("vertex a\nvertex b\nedge a b genus=-1\n")
    code, _, err = run(capsys, "check", str(bad))
    assert code == 2
    assert err.strip() == "error: NegativeGenus: line 3: negative genus -1"
    assert len(err.strip().splitlines()) == 1


def test_missing_file_exit_two(capsys):
    code, _, err = run(capsys, "realize", "/nonexistent.graph")
    assert code == 2 and err.startswith("error: UsageError")


def test_realize_json(capsys):
    code, out, _ = run(capsys, "realize", PATH)
    plan = json.loads(out)
    assert code == 0
    assert [e["kind"] for e in plan["events"]] == ["fold-cap", "interior", "fold-cap"]


def test_random_deterministic(capsys):
    _, a, _ = run(capsys, "random", "--seed", "7")
    _, b, _ = run(capsys, "random", "--seed", "7")
    _, c, _ = run(capsys, "random", "--seed", "8")
    assert a == b and a != c
    g = parse_graph(a)
    assert validate(g) == [] and has_good_function(g)


def test_random_forced_bounds(capsys):
    _, out, _ = run(capsys, "random", "--max-vertices", "2", "--max-edges", "1", "--max-genus", "0")
    assert out == "vertex v0\nvertex v1\nedge v1 v0 genus=0\n" or \
        out == "vertex v0\nvertex v1\nedge v0 v1 genus=0\n"


def test_random_formats(capsys):
    _, dot, _ = run(capsys, "random", "--seed", "3", "--format", "dot")
    assert dot.startswith("graph G {")
    _, js, _ = run(capsys, "random", "--seed", "3", "--format", "json")
    assert json.loads(js)["edges"]


def test_random_graph_covers_multigraphs():
    seen_parallel = False
    for seed in range(300):
        g = random_graph(seed, Bounds(10, 15, 4))
        pairs = [frozenset((e.u, e.v)) for e in g.edges]
        seen_parallel |= len(set(pairs)) < len(pairs)
        assert max(e.genus for e in g.edges) <= 4
        assert len(g.vertices) <= 10 and len(g.edges) <= 15
    assert seen_parallel


def test_verify_batch_preserves_order(capsys):
    code, out, _ = run(capsys, "verify", "--random-count", "12", "--seed", "100", "--batch", "3")
    reports = json.loads(out)
    assert code == 0
    assert [r["input"] for r in reports] == [f"random:{s}" for s in range(100, 112)]
    _, serial, _ = run(capsys, "verify", "--random-count", "12", "--seed", "100")
    assert serial == out


def test_sweep_off(capsys):
    code, out, _ = run(capsys, "sweep-off", str(FIXTURES / "torus.off"))
    w = json.loads(out)
    assert code == 0 and len(w["vertices"]) == 4 and len(w["edges"]) == 4
    code, out, _ = run(capsys, "sweep-off", str(FIXTURES / "octahedron.off"), "--format", "dot")
    assert out.count(" -- ") == 1


def test_sweep_off_bad_mesh(capsys):
    code, _, err = run(capsys, "sweep-off", str(FIXTURES / "open_square.off"))
    assert code == 2 and "NotClosedSurface" in err


def test_sweep_off_sidecar(capsys, tmp_path):
    values = tmp_path / "vals.txt"
    # height along x, written as exact rationals; equator ties break by index
    values.write_text("3/2\n-3/2\n0\n0\n0\n0\n")
    code, out, _ = run(capsys, "sweep-off", str(FIXTURES / "octahedron.off"),
                       "--values", str(values))
    assert code == 0 and len(json.loads(out)["edges"]) == 1


def test_export_dot(capsys):
    _, out, _ = run(capsys, "export-dot", PATH, "--heights")
    assert 'label="2"' in out and "h=2" in out


def test_output_flag(capsys, tmp_path):
    target = tmp_path / "plan.json"
    code, out, _ = run(capsys, "realize", PATH, "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["invariants"]["global_chi"] == 0


def test_stdin_input(monkeypatch, capsys):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO(Path(PATH).read_text()))
    code, _, _ = run(capsys, "verify", "-")
    assert code == 0


@pytest.mark.parametrize("argv", [
    ["realize", PATH],
    ["verify", PATH],
    ["random", "--seed", "11"],
])
def test_byte_identical_across_processes(argv):
    cmd = [sys.executable, "-m", "reebforge.cli", *argv]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a


def test_no_color_env(tmp_path):
    env = {"REEBFORGE_NO_COLOR": "1", "PATH": "/usr/bin:/bin"}
    r = subprocess.run([sys.executable, "-m", "reebforge.cli", "verify", LOOP],
                       capture_output=True, text=True, env=env)
    assert r.returncode == 1 and "\x1b[" not in r.stderr
