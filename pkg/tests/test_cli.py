import json

import pytest

from ramsq.cli import EXIT_FAIL, EXIT_OK, EXIT_UNKNOWN, EXIT_USAGE, main
from ramsq.core import RED, read_cgr
from ramsq.construction import Target, build_construction, certify_no_mono_square, derive_partition
from ramsq.powers import graph6_decode, square_path
from ramsq.search import contains_mono_subgraph


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_construct_verify_pipeline(tmp_path, capsys):
    out = tmp_path / "c3.cgr"
    code, _, _ = run(capsys, "construct", "--n", "3", "--variant", "base", "-o", str(out))
    assert code == EXIT_OK
    code, text, _ = run(capsys, "verify-construction", str(out), "--n", "3", "--target", "p3n")
    assert code == EXIT_OK and "accepted: True" in text
    code, text, _ = run(capsys, "verify-construction", str(out), "--n", "3",
                        "--target", "p3n", "--exact", "--json")
    assert code == EXIT_OK
    data = json.loads(text)
    assert data["accepted"] and data["exact_search"] == {"red": False, "blue": False}


def test_cli_matches_library(tmp_path, capsys):
    out = tmp_path / "c4.cgr"
    run(capsys, "construct", "--n", "4", "--variant", "plus2",
        "--interior", "all-blue", "-o", str(out))
    g = read_cgr(out)
    gg, part = build_construction(4, "plus2", "all-blue")
    assert g == gg
    code, text, _ = run(capsys, "verify-construction", str(out), "--n", "4",
                        "--target", "p3n2", "--json")
    lib = certify_no_mono_square(g, derive_partition(g, 4), Target.P3N2)
    data = json.loads(text)
    assert data["accepted"] == lib.accepted
    assert data["components"] == [c.describe() for c in lib.components]


def test_verify_refusal_exit_code(tmp_path, capsys):
    out = tmp_path / "bad.cgr"
    run(capsys, "construct", "--n", "3", "-o", str(out))
    text = out.read_text()
    # corrupt one template pair: flip the very first character (an X1 pair)
    lines = text.splitlines()
    lines[1] = ("R" if lines[1][0] == "B" else "B") + lines[1][1:]
    out.write_text("\n".join(lines) + "\n")
    code, _, _ = run(capsys, "verify-construction", str(out), "--n", "3", "--target", "p3n")
    assert code == EXIT_FAIL


def test_search_exit_codes(capsys, tmp_path):
    code, text, _ = run(capsys, "search", "--order", "6", "--target", "k3")
    assert code == EXIT_OK and "exhausted" in text
    witness = tmp_path / "w.cgr"
    code, text, _ = run(capsys, "search", "--order", "5", "--target", "k3",
                        "-o", str(witness))
    assert code == EXIT_OK and "witness" in text
    g = read_cgr(witness)
    from ramsq.powers import SimpleGraph
    k3 = SimpleGraph.from_edges(3, [(0, 1), (0, 2), (1, 2)])
    from ramsq.core import BLUE
    assert contains_mono_subgraph(g, RED, k3) is False
    assert contains_mono_subgraph(g, BLUE, k3) is False
    code, _, _ = run(capsys, "search", "--order", "6", "--target", "k3",
                     "--budget-nodes", "3")
    assert code == EXIT_UNKNOWN


def test_square_emits_graph6(capsys, tmp_path):
    out = tmp_path / "p10.g6"
    code, _, _ = run(capsys, "square", "--kind", "path", "--n", "10", "-o", str(out))
    assert code == EXIT_OK
    assert graph6_decode(out.read_text()) == square_path(10)


def test_components_and_factor(tmp_path, capsys):
    out = tmp_path / "c3.cgr"
    run(capsys, "construct", "--n", "3", "-o", str(out))
    code, text, _ = run(capsys, "components", str(out), "--colour", "red", "--census")
    assert code == EXIT_OK and "components: 3" in text
    code, text, _ = run(capsys, "factor", str(out), "--colour", "red",
                        "--mode", "exact", "--json")
    assert code == EXIT_OK
    data = json.loads(text)
    assert data["triangles"] >= 1


def test_cliques_and_stability(tmp_path, capsys):
    out = tmp_path / "c12.cgr"
    run(capsys, "construct", "--n", "12", "-o", str(out))
    code, text, _ = run(capsys, "cliques", str(out), "--m", "3", "--json")
    assert code == EXIT_OK
    data = json.loads(text)
    assert data["bin_size"] <= 5
    code, text, _ = run(capsys, "stability", str(out), "--t", "12", "--eps", "0.2",
                        "--json-report")
    assert code == EXIT_OK
    data = json.loads(text)
    assert data["outcome"] == "partition" and data["passed"]


def test_embed_cli(tmp_path, capsys):
    from ramsq.core import ColouredGraph, write_cgr
    red9 = ColouredGraph.new_complete(9, RED)
    path = tmp_path / "r9.cgr"
    write_cgr(red9, path)
    code, text, _ = run(capsys, "embed", "--reduced", str(path), "--colour", "red",
                        "--host", "square-path:30", "--rho", "0.3", "--beta", "0.25",
                        "--seed", "3", "--json")
    assert code == EXIT_OK
    data = json.loads(text)
    assert data["edge_check"] is True
    code, text, _ = run(capsys, "embed", "--reduced", str(path), "--colour", "red",
                        "--host", "square-path:120", "--rho", "0.1", "--beta", "0.06",
                        "--trials", "5", "--json")
    assert code == EXIT_OK
    assert "exceed_fraction" in json.loads(text)


def test_usage_errors(capsys, tmp_path):
    code, _, _ = run(capsys, "verify-construction", str(tmp_path / "missing.cgr"),
                     "--n", "3", "--target", "p3n")
    assert code == EXIT_USAGE
    code, _, _ = run(capsys, "search", "--order", "5", "--target", "nonsense")
    assert code == EXIT_USAGE
    code = main(["construct", "--n", "oops", "-o", "x"])
    assert code == EXIT_USAGE


def test_factor_tripartite_and_corradi_modes(tmp_path, capsys):
    from ramsq.core import ColouredGraph, write_cgr
    from ramsq.bitset import mask_of
    # balanced all-red tripartite graph for the tripartite mode
    n = 4
    g = ColouredGraph(3 * n)
    for a in range(3):
        for b in range(a + 1, 3):
            for u in range(a * n, (a + 1) * n):
                for v in range(b * n, (b + 1) * n):
                    g.set_edge(u, v, RED)
    path = tmp_path / "tri.cgr"
    write_cgr(g, path)
    code, text, _ = run(capsys, "factor", str(path), "--colour", "red",
                        "--mode", "tripartite", "--json")
    assert code == EXIT_OK and json.loads(text)["triangles"] == n
    # complete red graph for the degree-2/3 mode
    k = ColouredGraph.new_complete(9, RED)
    path2 = tmp_path / "k9.cgr"
    write_cgr(k, path2)
    code, text, _ = run(capsys, "factor", str(path2), "--colour", "red",
                        "--mode", "corradi", "--json")
    assert code == EXIT_OK and json.loads(text)["triangles"] == 3
