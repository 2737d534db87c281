import itertools
import random

import pytest

from udg5.sat import (CdclSolver, CnfFormula, SolverConfig, _luby, export_dimacs,
                      import_dimacs, import_model, solve_cnf, verify_model)


def php(n):
    holes = n - 1
    def var(p, h):
        return p * holes + h + 1
    cls = [[var(p, h) for h in range(holes)] for p in range(n)]
    for h in range(holes):
        for p1 in range(n):
            for p2 in range(p1 + 1, n):
                cls.append([-var(p1, h), -var(p2, h)])
    return CnfFormula(n * holes, cls)


def test_luby():
    assert [_luby(i) for i in range(15)] == [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]


def test_trivial():
    assert solve_cnf(CnfFormula(1, [[1]])).verdict == "SAT"
    assert solve_cnf(CnfFormula(1, [[1], [-1]])).verdict == "UNSAT"
    r = solve_cnf(CnfFormula(2, [[1, 2], [-1, 2], [1, -2]]))
    assert r.is_sat and verify_model(r.cnf if hasattr(r, 'cnf') else CnfFormula(2, [[1, 2], [-1, 2], [1, -2]]), r.model)


def test_empty_clause_rejected():
    with pytest.raises(ValueError):
        CnfFormula(1, [[]])


def test_pigeonhole_unsat():
    for n in (5, 7, 8):
        r = solve_cnf(php(n))
        assert r.is_unsat
        assert r.stats.conflicts > 25


def test_random_vs_bruteforce():
    rng = random.Random(7)
    for _ in range(300):
        nv = rng.randint(3, 10)
        nc = rng.randint(3, 40)
        cls = [[rng.choice([1, -1]) * rng.randint(1, nv) for _ in range(3)]
               for _ in range(nc)]
        cnf = CnfFormula(nv, cls)
        r = solve_cnf(cnf)
        bf = any(verify_model(cnf, [False] + list(bits))
                 for bits in itertools.product([False, True], repeat=nv))
        assert (r.verdict == "SAT") == bf
        if r.is_sat:
            assert verify_model(cnf, r.model)


def test_determinism():
    cnf = php(7)
    runs = [CdclSolver(cnf.copy(), SolverConfig(seed=42)).solve() for _ in range(2)]
    assert runs[0].verdict == runs[1].verdict == "UNSAT"
    assert runs[0].stats.conflicts == runs[1].stats.conflicts
    assert runs[0].stats.decisions == runs[1].stats.decisions
    assert runs[0].stats.propagations == runs[1].stats.propagations
    other = CdclSolver(cnf.copy(), SolverConfig(seed=43)).solve()
    assert other.verdict == "UNSAT"


def test_budget_indeterminate():
    r = CdclSolver(php(10), SolverConfig(max_conflicts=50)).solve()
    assert r.verdict == "INDETERMINATE"
    assert r.budget == {"conflicts": 50}


def test_assumptions_as_units():
    cnf = CnfFormula(3, [[1, 2], [-2, 3]])
    r = solve_cnf(cnf, assumptions=[-1])
    assert r.is_sat and r.model[2] and r.model[3]
    r2 = solve_cnf(CnfFormula(2, [[1, 2], [-1], [-2]]), assumptions=[1])
    assert r2.is_unsat


def test_dimacs_round_trip():
    cnf = php(5)
    data = export_dimacs(cnf)
    assert data.startswith(b"p cnf 20 ")
    cnf2 = import_dimacs(data)
    assert cnf2.num_vars == cnf.num_vars
    assert cnf2.clauses == cnf.clauses
    assert solve_cnf(cnf2).verdict == solve_cnf(cnf.copy()).verdict


def test_dimacs_k2_example():
    # single-edge graph, one color: 2 vars, 3 clauses
    from udg5.coloring import encode_coloring
    from udg5.graphs import AbstractGraph
    cnf = encode_coloring(AbstractGraph(2, [(0, 1)]), 1)
    text = export_dimacs(cnf).decode()
    lines = text.strip().splitlines()
    assert lines[0] == "p cnf 2 3"
    assert set(lines[1:]) == {"1 0", "2 0", "-1 -2 0"}
    assert solve_cnf(cnf).is_unsat


def test_import_model():
    out = "c comment\ns SATISFIABLE\nv 1 -2 3 0\n"
    m = import_model(out, 3)
    assert m[1] and not m[2] and m[3]
    assert import_model("s UNSATISFIABLE\n", 3) is None
    with pytest.raises(ValueError):
        import_model("garbage\n", 3)


def test_bad_model_is_caught():
    cnf = CnfFormula(2, [[1], [2]])
    assert not verify_model(cnf, [False, True, False])
    assert verify_model(cnf, [False, True, True])
