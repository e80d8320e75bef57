import csv
import json
import subprocess
import sys

import pytest

from conftest import complete, cycle, path
from starfactor.cli import main
from starfactor.io import read_graph, write_graph
from starfactor.packing import Star, StarPacking, format_packing


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def strip_times(doc):
    doc = dict(doc)
    doc.pop("wall_time_ms", None)
    return doc


def test_gen_lower_bound(tmp_path, capsys):
    f = tmp_path / "lb.txt"
    code, _, err = run(capsys, "gen", "lower-bound", "--d", 4, "--n", 10, "--seed", 0, "--out", f)
    assert code == 0 and "vertices 34" in err
    assert read_graph(f).vertex_count == 34


def test_gen_regular_roundtrip(tmp_path, capsys):
    f = tmp_path / "r.txt"
    assert run(capsys, "gen", "regular", "--n", 10, "--d", 3, "--seed", 1, "--out", f)[0] == 0
    assert read_graph(f).degrees() == [3] * 10
    code, out, _ = run(capsys, "gen", "regular", "--n", 10, "--d", 3, "--seed", 1)
    assert out == f.read_text()


def test_gen_parity_error(capsys):
    code, _, err = run(capsys, "gen", "regular", "--n", 5, "--d", 3, "--seed", 1)
    assert code == 2 and "even" in err


def test_gen_without_seed_prints_seed(capsys):
    code, out, err = run(capsys, "gen", "min-degree", "--n", 8, "--d", 2)
    assert code == 0 and err.startswith("seed: ")


def test_solve_k10(tmp_path, capsys):
    g, p, r = tmp_path / "g.txt", tmp_path / "p.txt", tmp_path / "r.json"
    write_graph(complete(10), g)
    code, _, _ = run(capsys, "solve", g, "--d", 9, "--seed", 1, "--out", p, "--report", r)
    assert code == 0
    doc = json.loads(r.read_text())
    assert doc["achieved_ell"] >= 1
    assert list(doc) == sorted(doc)
    assert run(capsys, "verify", g, p)[0] == 0


def test_solve_d_too_large(tmp_path, capsys):
    g = tmp_path / "g.txt"
    write_graph(cycle(6), g)
    assert run(capsys, "solve", g, "--d", 3, "--seed", 0)[0] == 2


def test_solve_lower_bound(tmp_path, capsys):
    g, r = tmp_path / "g.txt", tmp_path / "r.json"
    assert run(capsys, "gen", "lower-bound", "--d", 4, "--n", 40, "--seed", 0, "--out", g)[0] == 0
    code, out, _ = run(capsys, "solve", g, "--d", 4, "--seed", 0, "--report", r)
    assert code == 0 and out.startswith("ell ")
    assert json.loads(r.read_text())["achieved_ell"] <= 3


def test_solve_faithful_failure_exit_3(tmp_path, capsys):
    g = tmp_path / "g.txt"
    write_graph(complete(12), g)
    code, _, err = run(capsys, "solve", g, "--d", 11, "--mode", "faithful", "--seed", 0)
    assert code == 3 and "stage" in err


def test_solve_regular_method(tmp_path, capsys):
    g = tmp_path / "g.txt"
    run(capsys, "gen", "regular", "--n", 200, "--d", 16, "--seed", 3, "--out", g)
    code, out, _ = run(capsys, "solve", g, "--d", 16, "--seed", 3, "--method", "regular")
    assert code == 0


def test_verify_outcomes(tmp_path, capsys):
    g, p = tmp_path / "g.txt", tmp_path / "p.txt"
    write_graph(cycle(4), g)
    p.write_text(format_packing(StarPacking((Star(0, (1, 3)),), 2)))
    code, out, _ = run(capsys, "verify", g, p)
    assert code == 1 and "uncovered: 2" in out
    assert run(capsys, "verify", g, p, "--cover", "0,1,3")[0] == 0
    assert run(capsys, "verify", g, p, "--cover", "none", "--ell", 3)[0] == 1
    p.write_text("ell 1\ns 0 x\n")
    assert run(capsys, "verify", g, p)[0] == 2
    assert run(capsys, "verify", g, tmp_path / "nope.txt")[0] == 2
    p.write_text("ell 2\ns 0 1 3\n")
    assert run(capsys, "verify", g, p, "--cover", "a,b")[0] == 2


def test_oracle_command(tmp_path, capsys):
    k4, c4, big = tmp_path / "k4.txt", tmp_path / "c4.txt", tmp_path / "p20.txt"
    write_graph(complete(4), k4)
    write_graph(cycle(4), c4)
    write_graph(path(20), big)
    assert run(capsys, "oracle", k4)[1].strip() == "3"
    assert run(capsys, "oracle", c4, "--ell", 2)[1].strip() == "no"
    assert run(capsys, "oracle", big)[0] == 2
    code, out, _ = run(capsys, "oracle", big, "--limit", 20)
    assert code == 0 and out.strip() == "1"


def test_bench_min_degree(tmp_path, capsys):
    f = tmp_path / "b.csv"
    code, _, _ = run(capsys, "bench", "--family", "min-degree", "--d-list", "9,16,25", "--n", 500,
                     "--trials", 3, "--seed", 1, "--csv", f)
    assert code == 0
    rows = list(csv.DictReader(f.open(newline="")))
    assert len(rows) == 9
    assert all(r["verified"] == "1" and r["error"] == "" for r in rows)
    assert {"family", "n", "d", "trial", "seed", "achieved_ell", "sqrt_d", "paper_target_ell",
            "c_tilde", "fallback_used", "wall_time_ms"} <= set(rows[0])


def test_bench_lower_bound_rows_respect_bound(capsys):
    code, out, _ = run(capsys, "bench", "--family", "lower-bound", "--d-list", "1,4,9", "--n", 20,
                       "--trials", 2, "--seed", 4)
    assert code == 0
    rows = list(csv.DictReader(out.splitlines()))
    assert len(rows) == 6
    for r in rows:
        assert r["verified"] == "1"
        assert int(r["achieved_ell"]) <= int(r["upper_bound"])


def test_bench_workers_match_serial(capsys):
    args = ["bench", "--family", "regular", "--d-list", "4,6", "--n", 60, "--trials", 2, "--seed", 9]
    _, serial, _ = run(capsys, *args)
    _, par, _ = run(capsys, *args, "--workers", 2)

    def table(text):
        return [{k: v for k, v in r.items() if k != "wall_time_ms"} for r in csv.DictReader(text.splitlines())]

    assert table(serial) == table(par)


def test_bench_usage_errors(capsys):
    assert run(capsys, "bench", "--family", "min-degree", "--d-list", "", "--n", 10)[0] == 2
    assert run(capsys, "bench", "--family", "bogus", "--d-list", "4", "--n", 10)[0] == 2
    assert run(capsys, "nope")[0] == 2


def test_determinism_across_runs(tmp_path, capsys):
    outs = []
    for i in range(2):
        g, p, r = tmp_path / f"g{i}.txt", tmp_path / f"p{i}.txt", tmp_path / f"r{i}.json"
        run(capsys, "gen", "min-degree", "--n", 300, "--d", 12, "--seed", 42, "--out", g)
        run(capsys, "solve", g, "--d", 12, "--seed", 42, "--out", p, "--report", r)
        outs.append((g.read_bytes(), p.read_bytes(), strip_times(json.loads(r.read_text()))))
    assert outs[0] == outs[1]


@pytest.mark.parametrize("argv", [["--help"], ["solve", "--help"]])
def test_help_exits_zero(capsys, argv):
    assert main(argv) == 0


def test_module_entry_point(tmp_path):
    g = tmp_path / "g.txt"
    write_graph(complete(4), g)
    res = subprocess.run([sys.executable, "-m", "starfactor", "oracle", str(g)], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "3"
