import json

import pytest

from core.cli import main
from core.families import gen_ak, gen_basic
from core.graph_core import parse_graph


def run(capsys, *argv):
    code = main(list(argv) + ["--threads", "1"])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_gen_then_stats(tmp_path, capsys):
    path = str(tmp_path / "a5.g")
    code, _, _ = run(capsys, "gen", "ak", "--k", "5", "-o", path)
    assert code == 0
    assert parse_graph((tmp_path / "a5.g").read_text()) == gen_ak(5)
    code, out = run_json(capsys, "stats", path)
    assert code == 0
    assert out["graph"]["n"] == 12 and out["graph"]["m"] == 16 and out["graph"]["delta"] == 5
    assert "stats" not in out


def test_gen_to_stdout(capsys):
    code, out, _ = run(capsys, "gen", "path", "--n", "3")
    assert code == 0
    assert parse_graph(out) == gen_basic("path", 3)


def test_solve_line_json(graph_file, capsys):
    path = graph_file(gen_ak(5), "a5.g")
    code, out = run_json(capsys, "solve", "--exact", "--line", path)
    assert code == 0
    assert list(out)[:4] == ["verb", "psi", "set", "verified"]
    assert out["psi"] == 3 and out["verified"] is True
    assert len(out["set"]) == 3


def test_solve_output_is_stable(graph_file, capsys):
    path = graph_file(gen_basic("cycle", 6))
    first = run(capsys, "solve", path, "--json")[1]
    assert run(capsys, "solve", path, "--json")[1] == first


def test_solve_modes(graph_file, example, capsys):
    path = graph_file(example, "example.g")
    assert run_json(capsys, "solve", "--decompose", "--line", path)[1]["psi"] == 4
    out = run_json(capsys, "solve", "--mu", path)[1]
    assert out["psi"] == 3 and out["quantity"] == "mu"
    k3 = graph_file(gen_basic("complete", 3), "k3.g")
    out = run_json(capsys, "solve", k3, "--d", "2")[1]
    assert out["psi"] == 1 and out["fixed"] == ["2"]


def test_tree_construct(graph_file, example, capsys):
    path = graph_file(example, "example.g")
    code, out = run_json(capsys, "tree", "--construct", path)
    assert code == 0
    assert out["set"] == ["v2_v6", "v8_v11", "v9_v12", "v10_v13"]
    assert out["psi"] == 4 and out["verified"] is True
    assert out["stats"] == {"sigma": 6, "ex": 3, "ex_prime": 2}


def test_tree_formulas(graph_file, example, capsys):
    path = graph_file(example, "example.g")
    assert run_json(capsys, "tree", "--psi", path)[1]["psi"] == 4
    assert run_json(capsys, "tree", "--mu", path)[1]["mu"] == 3


def test_tree_rejects_cycle(graph_file, capsys):
    code, _, err = run(capsys, "tree", "--psi", graph_file(gen_basic("cycle", 4)))
    assert code == 2
    assert "not a tree" in err


def test_verify(graph_file, capsys):
    path = graph_file(gen_basic("path", 4), "p4.g")
    code, out = run_json(capsys, "verify", "--line", "--set", "0_1,3_2", path)
    assert code == 0 and out["verified"] is True
    assert out["set"] == ["0_1", "2_3"]

    code, out, _ = run(capsys, "verify", "--set", "0,1", path)
    assert code == 1
    assert "unresolved pair: 1 2" in out


def test_verify_pair(graph_file, capsys):
    path = graph_file(gen_basic("complete", 3), "k3.g")
    code, out = run_json(capsys, "verify", "--set", "0,1", "--pair", "0,2", path)
    assert code == 0
    assert out["resolved_by"] == ["0", "1"]


def test_bounds(graph_file, k4, capsys):
    code, out = run_json(capsys, "bounds", graph_file(k4, "k4.g"))
    assert code == 0
    assert out["bounds"] == {"lower": 2, "upper": 3}
    assert out["set"] == ["0_1", "0_2", "0_3"]


def test_decompose(graph_file, capsys):
    code, out = run_json(capsys, "decompose", graph_file(gen_basic("path", 4)))
    assert code == 0
    assert out["blocks"] == [["0", "1"], ["1", "2"], ["2", "3"]]
    assert out["cut_vertices"] == ["1", "2"]


def test_linegraph(graph_file, tmp_path, capsys):
    out_path = tmp_path / "lg.g"
    code, _, _ = run(capsys, "linegraph", graph_file(gen_basic("star", 4)), "-o", str(out_path))
    assert code == 0
    lg = parse_graph(out_path.read_text())
    assert (lg.n, lg.m) == (3, 3)


def test_reduce_with_matching(tmp_path, capsys):
    out_path = tmp_path / "gadget.g"
    code, out = run_json(capsys, "reduce", "--n", "1", "--triples", "0,0,0", "--with-matching", "-o", str(out_path))
    assert code == 0
    assert out["psi"] == 5 and out["verified"] is True
    assert out["gadget"]["vertices"] == 13 and out["gadget"]["K"] == 5
    assert parse_graph(out_path.read_text()).m == 14


def test_reduce_from_file_without_matching(tmp_path, capsys):
    inst = tmp_path / "bad.3dm"
    inst.write_text("3dm 2 2\n0 0 0\n1 1 0\n")
    code, out = run_json(capsys, "reduce", str(inst), "--N", "2", "--with-matching")
    assert code == 1
    assert out["matching"] == []
    assert out["gadget"]["N"] == 2


def test_work_limit_exit_code(graph_file, k4, capsys):
    code, _, err = run(capsys, "solve", graph_file(k4), "--work-limit", "1")
    assert code == 3
    assert "work limit" in err


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["solve", "--exact", "--decompose", "x.g"],
    ["gen", "ak"],
])
def test_usage_errors(capsys, argv):
    assert main(argv) == 2


def test_input_errors(tmp_path, capsys):
    bad = tmp_path / "bad.g"
    bad.write_text("g 3 2\n0 1\n0 1\n")
    code, _, err = run(capsys, "stats", str(bad))
    assert code == 2
    assert "line 3" in err
    assert run(capsys, "stats", str(tmp_path / "missing.g"))[0] == 2


def test_check_writes_report(tmp_path, capsys):
    report = tmp_path / "checks.xlsx"
    code, out = run_json(capsys, "check", "--only", "clique_lemma", "--quick", "--report", str(report))
    assert code == 0
    assert out["verified"] is True
    assert out["checks"][0]["check"] == "clique_lemma"
    assert report.stat().st_size > 0


@pytest.mark.parametrize("triples", ["0,x,0", "0,0", "0,0,0,0"])
def test_reduce_rejects_malformed_triples(capsys, triples):
    code, _, err = run(capsys, "reduce", "--n", "1", "--triples", triples)
    assert code == 2
    assert "--triples" in err


@pytest.mark.parametrize("pair", ["0", "0,1,2"])
def test_verify_pair_needs_two_labels(graph_file, capsys, pair):
    path = graph_file(gen_basic("complete", 3), "k3.g")
    code, _, err = run(capsys, "verify", "--set", "0,1", "--pair", pair, path)
    assert code == 2
    assert "--pair" in err


def test_tree_construct_past_verify_limit(graph_file, example, capsys, monkeypatch):
    path = graph_file(example, "example.g")
    monkeypatch.setattr("core.cli.MAX_VERIFY_VERTICES", 5)

    def no_line_graph(g):
        raise AssertionError("L(T) should not be built")

    monkeypatch.setattr("core.cli.line_graph", no_line_graph)
    code, _, err = run(capsys, "tree", "--construct", path)
    assert code == 2
    assert "--trust-formula" in err

    code, out = run_json(capsys, "tree", "--construct", "--trust-formula", path)
    assert code == 0
    assert out["set"] == ["v2_v6", "v8_v11", "v9_v12", "v10_v13"]
    assert "verified" not in out


def test_stats_keys(graph_file, example, capsys):
    code, out = run_json(capsys, "stats", "--tree", graph_file(example, "example.g"))
    assert code == 0
    assert out["stats"] == {"sigma": 6, "ex": 3, "ex_prime": 2}
    assert out["graph"]["tree"] is True and out["graph"]["n"] == 13


@pytest.mark.parametrize("mode", ["--decompose", "--mu"])
def test_solve_d_only_with_exact(graph_file, capsys, mode):
    k3 = graph_file(gen_basic("complete", 3), "k3.g")
    code, _, err = run(capsys, "solve", mode, "--d", "2", k3)
    assert code == 2
    assert "--d" in err


def test_help_lists_exit_codes(capsys):
    assert main(["--help"]) == 0
    out = capsys.readouterr().out
    assert "exit codes:" in out and "drs gen ak" in out
