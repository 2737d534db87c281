"""Graph k-colorability via SAT, plus greedy bounds and certificates.

The CNF encoding uses one variable per (vertex, color) pair: every vertex
takes at least one color, and no edge is monochromatic in any color.
At-most-one-color clauses are deliberately absent; a model may set several
colors for a vertex and decoding picks the lowest, which the conflict
clauses still keep proper.
"""

from __future__ import annotations

import shlex
import subprocess
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

from .graphs import AbstractGraph, UnitDistanceGraph
from .sat import (CdclSolver, CnfFormula, SolveResult, SolverConfig,
                  export_dimacs, import_model, verify_model)

GraphLike = Union[AbstractGraph, UnitDistanceGraph]


def _as_abstract(g: GraphLike) -> AbstractGraph:
    return g.abstract() if isinstance(g, UnitDistanceGraph) else g


@dataclass
class ColoringCertificate:
    """A proper coloring, vertex -> color index in 1..k."""

    colors: list[int]

    def check(self, g: GraphLike) -> bool:
        g = _as_abstract(g)
        if len(self.colors) != g.n:
            return False
        if any(c < 1 for c in self.colors):
            return False
        return all(self.colors[u] != self.colors[v] for u, v in g.edges)

    @property
    def num_colors(self) -> int:
        return max(self.colors) if self.colors else 0


def encode_coloring(g: GraphLike, k: int) -> CnfFormula:
    """CNF for k-colorability; n*k variables, n + k*|E| clauses."""
    if k < 1:
        raise ValueError("k must be >= 1")
    g = _as_abstract(g)
    n = g.n

    def var(i: int, c: int) -> int:
        return i * k + c + 1

    clauses: list[list[int]] = [[var(i, c) for c in range(k)] for i in range(n)]
    for u, v in g.edges:
        for c in range(k):
            clauses.append([-var(u, c), -var(v, c)])
    cnf = CnfFormula(n * k, clauses, var_map={"n": n, "k": k})
    assert cnf.num_vars == n * k
    assert len(cnf.clauses) == n + k * g.num_edges
    return cnf


def decode_model(model: Sequence[bool], n: int, k: int) -> ColoringCertificate:
    colors = []
    for i in range(n):
        chosen = 0
        for c in range(k):
            if model[i * k + c + 1]:
                chosen = c + 1
                break
        if chosen == 0:
            raise ValueError(f"vertex {i} has no color in the model")
        colors.append(chosen)
    return ColoringCertificate(colors)


def greedy_clique(g: GraphLike, seeds: int = 24) -> list[int]:
    """A maximal clique found greedily from high-degree seed vertices."""
    g = _as_abstract(g)
    if g.n == 0:
        return []
    adj = [set() for _ in range(g.n)]
    for u, v in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    order = sorted(range(g.n), key=lambda v: -len(adj[v]))
    best: list[int] = [order[0]] if order else []
    for s in order[:seeds]:
        clique = [s]
        cand = set(adj[s])
        while cand:
            v = max(cand, key=lambda x: (len(adj[x] & cand), -x))
            clique.append(v)
            cand &= adj[v]
        if len(clique) > len(best):
            best = clique
    return best


def symmetry_break(g: GraphLike, k: int, cnf: CnfFormula) -> CnfFormula:
    """Fix the colors of a greedy maximal clique with unit clauses."""
    clique = greedy_clique(g)
    out = CnfFormula(cnf.num_vars, list(cnf.clauses), cnf.var_map)
    for t, v in enumerate(clique[:k]):
        out.clauses.append([v * k + t + 1])
    return out


def cdcl_solve(cnf: CnfFormula, budget_conflicts: Optional[int] = None,
               budget_seconds: Optional[float] = None, seed: int = 0,
               assumptions: Sequence[int] = ()) -> SolveResult:
    cfg = SolverConfig(seed=seed, max_conflicts=budget_conflicts,
                       max_seconds=budget_seconds)
    return CdclSolver(cnf, cfg).solve(assumptions)


def solve_k_coloring(g: GraphLike, k: int, budget_conflicts: Optional[int] = None,
                     budget_seconds: Optional[float] = None, seed: int = 0,
                     break_symmetry: bool = True,
                     assume_colors: Optional[dict[int, int]] = None) -> SolveResult:
    """SAT run for k-colorability with clique symmetry breaking.

    assume_colors maps vertex -> color (1..k) fixed via assumption literals.
    """
    cnf = encode_coloring(g, k)
    if break_symmetry and not assume_colors:
        cnf = symmetry_break(g, k, cnf)
    assumptions = []
    if assume_colors:
        for v, c in assume_colors.items():
            assumptions.append(v * k + c)
    res = cdcl_solve(cnf, budget_conflicts, budget_seconds, seed, assumptions)
    if res.is_sat:
        n = _as_abstract(g).n
        cert = decode_model(res.model, n, k)
        if not cert.check(g):
            raise AssertionError("SAT model decodes to an improper coloring")
    return res


def dsatur(g: GraphLike, kmax: Optional[int] = None, seed: int = 0,
           restarts: int = 1) -> Optional[ColoringCertificate]:
    """DSATUR greedy coloring; None if every restart needs > kmax colors.

    Failure is not a lower-bound proof.
    """
    g = _as_abstract(g)
    n = g.n
    if n == 0:
        return ColoringCertificate([])
    adj = g.adjacency()
    deg = [len(a) for a in adj]
    rng_state = (seed * 2654435761 + 1) & 0xFFFFFFFF
    best: Optional[list[int]] = None
    for attempt in range(max(1, restarts)):
        colors = [0] * n
        neigh_colors: list[set[int]] = [set() for _ in range(n)]
        uncolored = set(range(n))
        while uncolored:
            def rank(v: int) -> tuple:
                return (len(neigh_colors[v]), deg[v], -(v ^ rng_state) & 0xFFFF)
            v = max(uncolored, key=rank)
            c = 1
            while c in neigh_colors[v]:
                c += 1
            colors[v] = c
            uncolored.discard(v)
            for w in adj[v]:
                if not colors[w]:
                    neigh_colors[w].add(c)
        used = max(colors) if colors else 0
        if best is None or used < max(best):
            best = colors
        if kmax is None or used <= kmax:
            return ColoringCertificate(colors)
        rng_state = (rng_state * 1103515245 + 12345) & 0xFFFFFFFF
    if kmax is not None and best is not None and max(best) > kmax:
        return None
    return ColoringCertificate(best) if best else None


def brute_force_k_colorable(g: GraphLike, k: int) -> bool:
    """Exhaustive k-coloring search; oracle for small graphs (n <= 16)."""
    g = _as_abstract(g)
    if g.n > 16:
        raise ValueError("brute force limited to 16 vertices")
    adj = g.adjacency()
    colors = [0] * g.n

    def rec(i: int) -> bool:
        if i == g.n:
            return True
        # cap palette growth to break color symmetry
        used = max(colors[:i], default=0)
        for c in range(1, min(used + 1, k) + 1):
            if all(colors[w] != c for w in adj[i] if w < i):
                colors[i] = c
                if rec(i + 1):
                    return True
        colors[i] = 0
        return False

    return rec(0)


@dataclass
class ChromaticResult:
    """Outcome of a chromatic-number computation."""

    value: Optional[int]             # chromatic number, when determined
    exceeded_kmax: bool = False      # proper value > kmax
    indeterminate_at: Optional[int] = None   # k where the solver gave up
    budget: Optional[dict] = None
    certificate: Optional[ColoringCertificate] = None   # coloring at value
    unsat_below: bool = False        # UNSAT verdict at value-1 obtained

    def __repr__(self) -> str:
        if self.value is not None:
            return f"ChromaticResult({self.value})"
        if self.exceeded_kmax:
            return "ChromaticResult(> kmax)"
        return f"ChromaticResult(indeterminate at k={self.indeterminate_at})"


def chromatic_number(g: GraphLike, kmax: int,
                     budget_conflicts: Optional[int] = None,
                     budget_seconds: Optional[float] = None,
                     seed: int = 0) -> ChromaticResult:
    """Smallest k <= kmax admitting a proper coloring, fully certified.

    Every SAT verdict carries a re-verified coloring; the returned value k
    additionally has an UNSAT verdict at k-1 (unless k == 1).
    """
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    g_abs = _as_abstract(g)
    if g_abs.n == 0:
        return ChromaticResult(0, certificate=ColoringCertificate([]), unsat_below=True)
    last_unsat = 0
    for k in range(1, kmax + 1):
        # cheap upper-bound pass first
        cert = dsatur(g_abs, kmax=k, restarts=2, seed=seed)
        if cert is not None and cert.num_colors <= k and cert.check(g_abs):
            return ChromaticResult(k, certificate=cert, unsat_below=last_unsat == k - 1)
        res = solve_k_coloring(g_abs, k, budget_conflicts, budget_seconds, seed)
        if res.is_sat:
            cert = decode_model(res.model, g_abs.n, k)
            return ChromaticResult(k, certificate=cert, unsat_below=last_unsat == k - 1)
        if res.is_unsat:
            last_unsat = k
            continue
        return ChromaticResult(None, indeterminate_at=k, budget=res.budget)
    return ChromaticResult(None, exceeded_kmax=True, unsat_below=last_unsat == kmax)


def vertex_criticality_report(g: GraphLike, k: int,
                              budget_conflicts: Optional[int] = None,
                              budget_seconds: Optional[float] = None,
                              seed: int = 0) -> list[bool]:
    """Entry v is True iff the graph minus v is (k-1)-colorable."""
    g = _as_abstract(g)
    out = []
    for v in range(g.n):
        sub = g.without_vertex(v)
        res = solve_k_coloring(sub, k - 1, budget_conflicts, budget_seconds, seed)
        if res.verdict == "INDETERMINATE":
            raise TimeoutError(f"criticality check for vertex {v} ran out of budget "
                               f"({res.budget})")
        out.append(res.is_sat)
    return out


def five_coloring_with_anchor(g: GraphLike, anchor: int,
                              budget_seconds: Optional[float] = None,
                              seed: int = 0,
                              dsatur_restarts: int = 60,
                              ) -> Optional[ColoringCertificate]:
    """A proper 5-coloring where `anchor` is the only vertex of color 5.

    Equivalent to 4-coloring the graph minus the anchor: a greedy pass with
    restarts runs first, then a SAT run warm-started from the best greedy
    attempt.  Returns None if the budget runs out.
    """
    g = _as_abstract(g)
    rest = g.without_vertex(anchor)

    def lift(cert4: ColoringCertificate) -> ColoringCertificate:
        colors = []
        j = 0
        for v in range(g.n):
            if v == anchor:
                colors.append(5)
            else:
                colors.append(cert4.colors[j])
                j += 1
        out = ColoringCertificate(colors)
        if not out.check(g):
            raise AssertionError("anchored coloring failed verification")
        return out

    cert = dsatur(rest, kmax=4, restarts=dsatur_restarts, seed=seed)
    if cert is not None and cert.num_colors <= 4:
        return lift(cert)
    # warm start: phase from the best greedy coloring
    best = dsatur(rest, seed=seed + 1)
    cnf = encode_coloring(rest, 4)
    cnf = symmetry_break(rest, 4, cnf)
    from .sat import CdclSolver, SolverConfig
    solver = CdclSolver(cnf, SolverConfig(seed=seed, max_seconds=budget_seconds))
    if best is not None:
        for v, c in enumerate(best.colors):
            if c <= 4:
                solver.phase[v * 4 + c] = 1
    res = solver.solve()
    if res.is_sat:
        return lift(decode_model(res.model, rest.n, 4))
    if res.is_unsat:
        raise AssertionError("graph minus anchor is not 4-colorable")
    return None


def external_solve(cnf: CnfFormula, solver_command: str,
                   timeout: Optional[float] = None) -> SolveResult:
    """Run an external DIMACS solver and re-verify any model it returns.

    The command may contain a {cnf} placeholder for the input path; without
    one, DIMACS is piped to stdin.
    """
    stats_start = time.time()
    dimacs = export_dimacs(cnf)
    try:
        with tempfile.TemporaryDirectory() as tmp:
            if "{cnf}" in solver_command:
                path = Path(tmp) / "problem.cnf"
                path.write_bytes(dimacs)
                argv = [a.replace("{cnf}", str(path))
                        for a in shlex.split(solver_command)]
                proc = subprocess.run(argv, capture_output=True, timeout=timeout)
            else:
                argv = shlex.split(solver_command)
                proc = subprocess.run(argv, input=dimacs, capture_output=True,
                                      timeout=timeout)
    except FileNotFoundError as exc:
        raise RuntimeError(f"external solver not found: {exc}") from exc
    except subprocess.TimeoutExpired:
        res = SolveResult("INDETERMINATE", budget={"seconds": timeout,
                                                   "reason": "external timeout"})
        res.stats.elapsed = time.time() - stats_start
        return res
    out = proc.stdout.decode("ascii", errors="replace") + "\n" + \
        proc.stderr.decode("ascii", errors="replace")
    try:
        model = import_model(out, cnf.num_vars)
    except ValueError as exc:
        res = SolveResult("INDETERMINATE",
                          budget={"reason": f"unparseable solver output: {exc}",
                                  "returncode": proc.returncode})
        res.stats.elapsed = time.time() - stats_start
        return res
    if model is None:
        res = SolveResult("UNSAT")
    else:
        if not verify_model(cnf, model):
            raise AssertionError("external solver returned a model that fails "
                                 "independent verification")
        res = SolveResult("SAT", model=model)
    res.stats.elapsed = time.time() - stats_start
    return res
