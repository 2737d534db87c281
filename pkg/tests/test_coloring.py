import itertools
import random

import pytest

from udg5.catalog import golomb_points, l91_points, moser_spindle_points
from udg5.coloring import (ChromaticResult, ColoringCertificate, brute_force_k_colorable,
                           chromatic_number, decode_model, dsatur, encode_coloring,
                           external_solve, greedy_clique, solve_k_coloring,
                           symmetry_break, vertex_criticality_report)
from udg5.graphs import AbstractGraph, build_udg_plane
from udg5.sat import export_dimacs


def moser():
    return build_udg_plane(moser_spindle_points()).abstract()


def random_graph(rng, n, p):
    return AbstractGraph(n, [(i, j) for i in range(n) for j in range(i + 1, n)
                             if rng.random() < p])


def test_encode_sizes():
    g = moser()
    cnf = encode_coloring(g, 4)
    assert cnf.num_vars == 28
    assert len(cnf.clauses) == 7 + 4 * 11 == 51
    rng = random.Random(0)
    for _ in range(25):
        h = random_graph(rng, rng.randint(1, 9), 0.5)
        k = rng.randint(1, 5)
        cnf = encode_coloring(h, k)
        assert cnf.num_vars == h.n * k
        assert len(cnf.clauses) == h.n + k * h.num_edges


def test_moser_chromatic():
    g = moser()
    assert solve_k_coloring(g, 3).is_unsat
    r = solve_k_coloring(g, 4)
    assert r.is_sat
    res = chromatic_number(g, 5)
    assert res.value == 4
    assert res.certificate is not None and res.certificate.check(g)


def test_chromatic_number_small():
    k2 = AbstractGraph(2, [(0, 1)])
    assert chromatic_number(k2, 5).value == 2
    empty = AbstractGraph(3, [])
    assert chromatic_number(empty, 2).value == 1
    k4 = AbstractGraph(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])
    assert chromatic_number(k4, 3).exceeded_kmax
    assert chromatic_number(AbstractGraph(0, []), 3).value == 0


def test_cdcl_agrees_with_bruteforce():
    rng = random.Random(11)
    graphs = [moser(), build_udg_plane(golomb_points()).abstract(),
              build_udg_plane(l91_points()).abstract()]
    for _ in range(40):
        graphs.append(random_graph(rng, rng.randint(2, 12), rng.random() * 0.7))
    for g in graphs:
        for k in (1, 2, 3, 4):
            sat = solve_k_coloring(g, k, seed=3).is_sat
            assert sat == brute_force_k_colorable(g, k), (g, k)


def test_symmetry_break_properties():
    g = moser()
    clique = greedy_clique(g)
    assert len(clique) == 3  # largest clique in the spindle is a triangle
    cnf = encode_coloring(g, 4)
    broken = symmetry_break(g, 4, cnf)
    assert len(broken.clauses) == len(cnf.clauses) + 3
    # breaking preserves satisfiability on vertex-transitive graphs
    c5 = AbstractGraph(5, [(i, (i + 1) % 5) for i in range(5)])
    for k in (2, 3):
        plain = solve_k_coloring(c5, k, break_symmetry=False)
        sym = solve_k_coloring(c5, k, break_symmetry=True)
        assert plain.verdict == sym.verdict
    # edgeless graph still gets one unit clause
    edgeless = AbstractGraph(4, [])
    broken = symmetry_break(edgeless, 3, encode_coloring(edgeless, 3))
    assert len(broken.clauses) == 4 + 1


def test_dsatur():
    even = AbstractGraph(8, [(i, (i + 1) % 8) for i in range(8)])
    cert = dsatur(even)
    assert cert.num_colors == 2 and cert.check(even)
    m = dsatur(moser())
    assert m.num_colors == 4 and m.check(moser())
    assert dsatur(moser(), kmax=3, restarts=4) is None
    assert dsatur(AbstractGraph(0, [])).colors == []


def test_decode_picks_lowest_color():
    g = AbstractGraph(2, [(0, 1)])
    cnf = encode_coloring(g, 3)
    # hand-made model with two colors true for vertex 0
    model = [False] * (cnf.num_vars + 1)
    model[1] = True   # v0 color 1
    model[3] = True   # v0 color 3
    model[5] = True   # v1 color 2
    cert = decode_model(model, 2, 3)
    assert cert.colors == [1, 2]
    with pytest.raises(ValueError):
        decode_model([False] * 7, 2, 3)


def test_criticality():
    g = moser()
    rep = vertex_criticality_report(g, 4)
    assert rep == [True] * 7
    k3 = AbstractGraph(3, [(0, 1), (1, 2), (0, 2)])
    assert vertex_criticality_report(k3, 3) == [True] * 3
    # a non-critical vertex: triangle plus a pendant
    paw = AbstractGraph(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
    rep = vertex_criticality_report(paw, 3)
    assert rep[3] is False and rep[0] is True


def test_external_solver_bridge(tmp_path):
    fake = tmp_path / "fake.py"
    fake.write_text(
        "import sys\n"
        "sys.path.insert(0, '/root/pkg/src')\n"
        "from udg5.sat import import_dimacs, solve_cnf\n"
        "cnf = import_dimacs(sys.stdin.buffer.read())\n"
        "r = solve_cnf(cnf)\n"
        "if r.is_sat:\n"
        "    print('s SATISFIABLE')\n"
        "    print('v ' + ' '.join(str(v if r.model[v] else -v)"
        " for v in range(1, cnf.num_vars + 1)) + ' 0')\n"
        "else:\n"
        "    print('s UNSATISFIABLE')\n")
    g = moser()
    cmd = f"python3 {fake}"
    r3 = external_solve(encode_coloring(g, 3), cmd)
    r4 = external_solve(encode_coloring(g, 4), cmd)
    assert r3.is_unsat and r4.is_sat
    # second engine (file-based invocation) agrees on UNSAT
    fake2 = tmp_path / "fake2.py"
    fake2.write_text(
        "import sys\n"
        "sys.path.insert(0, '/root/pkg/src')\n"
        "from pathlib import Path\n"
        "from udg5.sat import import_dimacs, solve_cnf\n"
        "cnf = import_dimacs(Path(sys.argv[1]).read_bytes())\n"
        "print('s SATISFIABLE' if solve_cnf(cnf).is_sat else 's UNSATISFIABLE')\n")
    r3b = external_solve(encode_coloring(g, 3), f"python3 {fake2} {{cnf}}")
    assert r3b.is_unsat == r3.is_unsat
    with pytest.raises(RuntimeError):
        external_solve(encode_coloring(g, 3), "/nonexistent/solver-binary")
    garbage = tmp_path / "garbage.py"
    garbage.write_text("print('whatever')\n")
    r = external_solve(encode_coloring(g, 3), f"python3 {garbage}")
    assert r.verdict == "INDETERMINATE"
