"""Conflict-driven clause learning SAT solver.

A single-threaded CDCL engine tuned for graph-coloring formulas: two watched
literals for long clauses, dedicated implication lists for binary clauses
(the bulk of a coloring encoding), first-UIP learning with recursive clause
minimization, VSIDS branching with phase saving, Luby restarts and LBD-based
clause-database reduction.  Deterministic for a fixed seed and conflict
budget.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

UNDEF, TRUE, FALSE = 0, 1, 2


@dataclass
class CnfFormula:
    """A CNF with dense variable indices 1..num_vars.

    Clauses are lists of signed integers (DIMACS convention).  var_map is an
    optional payload recording what each variable means (e.g. vertex/color
    pairs for coloring encodings).
    """

    num_vars: int
    clauses: list[list[int]]
    var_map: Optional[dict] = None

    def __post_init__(self) -> None:
        for c in self.clauses:
            if not c:
                raise ValueError("empty clause at construction")
            for lit in c:
                v = abs(lit)
                if v == 0 or v > self.num_vars:
                    raise ValueError(f"literal {lit} out of range")

    def copy(self) -> "CnfFormula":
        return CnfFormula(self.num_vars, [list(c) for c in self.clauses],
                          dict(self.var_map) if self.var_map else None)


@dataclass
class SolverStats:
    conflicts: int = 0
    decisions: int = 0
    propagations: int = 0
    restarts: int = 0
    learned: int = 0
    elapsed: float = 0.0


@dataclass
class SolveResult:
    """Verdict of a SAT run: 'SAT', 'UNSAT' or 'INDETERMINATE'."""

    verdict: str
    model: Optional[list[bool]] = None  # model[v] for v in 1..n at index v
    stats: SolverStats = field(default_factory=SolverStats)
    budget: Optional[dict] = None

    @property
    def is_sat(self) -> bool:
        return self.verdict == "SAT"

    @property
    def is_unsat(self) -> bool:
        return self.verdict == "UNSAT"


def verify_model(cnf: CnfFormula, model: Sequence[bool]) -> bool:
    """Check a model against every clause, independently of the solver."""
    for clause in cnf.clauses:
        for lit in clause:
            v = abs(lit)
            if model[v] == (lit > 0):
                break
        else:
            return False
    return True


def _luby(x: int) -> int:
    """Luby sequence, 0-indexed: 1 1 2 1 1 2 4 1 1 2 1 1 2 4 8 ..."""
    size, seq = 1, 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) // 2
        seq -= 1
        x %= size
    return 1 << seq


@dataclass
class SolverConfig:
    seed: int = 0
    var_decay: float = 0.95
    restart_base: int = 128          # Luby unit, in conflicts
    reduce_base: int = 4000          # first clause-DB reduction
    reduce_incr: int = 600
    keep_lbd: int = 3                # learned clauses at this LBD never die
    max_conflicts: Optional[int] = None
    max_seconds: Optional[float] = None
    default_phase: bool = False


class CdclSolver:
    """CDCL over a fixed clause set.  Use solve() once per instance."""

    def __init__(self, cnf: CnfFormula, config: Optional[SolverConfig] = None):
        self.cnf = cnf
        self.cfg = config or SolverConfig()
        n = cnf.num_vars
        self.nvars = n
        self.vals = bytearray(2 * n + 2)
        self.level = [0] * (n + 1)
        self.reason: list = [None] * (n + 1)
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.bins: list[list[int]] = [[] for _ in range(2 * n + 2)]
        self.watches: list[list[list[int]]] = [[] for _ in range(2 * n + 2)]
        self.act = [0.0] * (n + 1)
        self.var_inc = 1.0
        self.phase = bytearray(n + 1)
        if self.cfg.default_phase:
            for v in range(n + 1):
                self.phase[v] = 1
        self.heap: list[tuple[float, int]] = []
        self.seen = bytearray(n + 1)
        self.stats = SolverStats()
        self.learnts: list[list[int]] = []
        self.lbd: dict[int, int] = {}
        self.ok = True
        self._units: list[int] = []
        rng_state = self.cfg.seed or 0
        # deterministic activity jitter so equal-activity ties vary with seed
        if rng_state:
            x = rng_state & 0xFFFFFFFF or 1
            for v in range(1, n + 1):
                x ^= (x << 13) & 0xFFFFFFFF
                x ^= x >> 17
                x ^= (x << 5) & 0xFFFFFFFF
                self.act[v] = (x % 1000) * 1e-9
        for clause in cnf.clauses:
            self._attach_initial(clause)

    # -- construction ------------------------------------------------------

    def _attach_initial(self, clause: Sequence[int]) -> None:
        lits = []
        seen = set()
        taut = False
        for lit in clause:
            lit = int(lit)
            l = (abs(lit) << 1) | (lit < 0)
            if l ^ 1 in seen:
                taut = True
                break
            if l not in seen:
                seen.add(l)
                lits.append(l)
        if taut:
            return
        if len(lits) == 1:
            self._units.append(lits[0])
        elif len(lits) == 2:
            a, b = lits
            self.bins[a ^ 1].append(b)
            self.bins[b ^ 1].append(a)
        else:
            self.watches[lits[0]].append(lits)
            self.watches[lits[1]].append(lits)

    # -- assignment machinery ------------------------------------------------

    def _assign(self, lit: int, reason) -> None:
        vals = self.vals
        vals[lit] = TRUE
        vals[lit ^ 1] = FALSE
        v = lit >> 1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _propagate(self):
        """Returns a conflict clause (list of lits, all false) or None."""
        vals = self.vals
        bins = self.bins
        watches = self.watches
        trail = self.trail
        nprops = 0
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            nprops += 1
            # binary implications of p
            for q in bins[p]:
                w = vals[q]
                if w == FALSE:
                    self.stats.propagations += nprops
                    return [q, p ^ 1]
                if w == UNDEF:
                    vals[q] = TRUE
                    vals[q ^ 1] = FALSE
                    v = q >> 1
                    self.level[v] = len(self.trail_lim)
                    self.reason[v] = p ^ 1
                    trail.append(q)
            # long clauses watching ~p
            fl = p ^ 1
            ws = watches[fl]
            i = 0
            j = 0
            end = len(ws)
            while i < end:
                c = ws[i]
                i += 1
                if c[0] == fl:
                    c[0] = c[1]
                    c[1] = fl
                first = c[0]
                if vals[first] == TRUE:
                    ws[j] = c
                    j += 1
                    continue
                # search replacement watch
                found = False
                for k in range(2, len(c)):
                    lk = c[k]
                    if vals[lk] != FALSE:
                        c[1] = lk
                        c[k] = fl
                        watches[lk].append(c)
                        found = True
                        break
                if found:
                    continue
                ws[j] = c
                j += 1
                if vals[first] == FALSE:
                    # conflict: keep remaining watchers
                    while i < end:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    del ws[j:]
                    self.stats.propagations += nprops
                    return c
                vals[first] = TRUE
                vals[first ^ 1] = FALSE
                v = first >> 1
                self.level[v] = len(self.trail_lim)
                self.reason[v] = c
                trail.append(first)
            del ws[j:]
        self.stats.propagations += nprops
        return None

    # -- analysis ------------------------------------------------------------

    def _bump(self, v: int) -> None:
        a = self.act[v] + self.var_inc
        self.act[v] = a
        if a > 1e100:
            inv = 1e-100
            for u in range(1, self.nvars + 1):
                self.act[u] *= inv
            self.var_inc *= inv
            self.heap = [(-self.act[u], u) for u in range(1, self.nvars + 1)
                         if self.vals[u << 1] == UNDEF]
            heapq.heapify(self.heap)
        else:
            heapq.heappush(self.heap, (-a, v))

    def _analyze(self, confl: list[int]) -> tuple[list[int], int, int]:
        """First-UIP learning; returns (learnt, backjump_level, lbd)."""
        seen = self.seen
        level = self.level
        trail = self.trail
        cur_level = len(self.trail_lim)
        learnt = [0]
        path = 0
        idx = len(trail) - 1
        p = -1
        reason_lits: Iterable[int] = confl
        while True:
            for q in reason_lits:
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = 1
                    self._bump(v)
                    if level[v] >= cur_level:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            seen[p >> 1] = 0
            path -= 1
            if path <= 0:
                break
            r = self.reason[p >> 1]
            if isinstance(r, int):
                reason_lits = (r,)
            else:
                reason_lits = (q for q in r if q != p)
        learnt[0] = p ^ 1

        # recursive minimization of the reason side
        if len(learnt) > 1:
            toclear = [q >> 1 for q in learnt[1:]]
            for v in toclear:
                seen[v] = 1
            keep = [learnt[0]]
            for q in learnt[1:]:
                if not self._redundant(q, toclear):
                    keep.append(q)
            for v in toclear:
                seen[v] = 0
            learnt = keep
        seen[learnt[0] >> 1] = 0

        if len(learnt) == 1:
            blevel = 0
        else:
            # move the highest-level literal (below current) to position 1
            mi = 1
            for k in range(2, len(learnt)):
                if self.level[learnt[k] >> 1] > self.level[learnt[mi] >> 1]:
                    mi = k
            learnt[1], learnt[mi] = learnt[mi], learnt[1]
            blevel = self.level[learnt[1] >> 1]
        lbd = len({self.level[q >> 1] for q in learnt})
        return learnt, blevel, lbd

    def _redundant(self, lit: int, toclear: list[int]) -> bool:
        """Is lit implied by the rest of the learnt clause (seen literals)?"""
        r = self.reason[lit >> 1]
        if r is None:
            return False
        stack = [lit]
        local: list[int] = []
        seen = self.seen
        ok = True
        while stack:
            q = stack.pop()
            r = self.reason[q >> 1]
            if r is None:
                ok = False
                break
            lits = (r,) if isinstance(r, int) else [x for x in r if (x >> 1) != (q >> 1)]
            for x in lits:
                v = x >> 1
                if seen[v] or self.level[v] == 0:
                    continue
                if self.reason[v] is None:
                    ok = False
                    break
                seen[v] = 1
                local.append(v)
                stack.append(x)
            if not ok:
                break
        if ok:
            # marks stay seen for later redundancy checks; clear with the rest
            toclear.extend(local)
        else:
            for v in local:
                seen[v] = 0
        return ok

    def _backjump(self, blevel: int) -> None:
        vals = self.vals
        trail = self.trail
        lim = self.trail_lim[blevel]
        for k in range(len(trail) - 1, lim - 1, -1):
            lit = trail[k]
            v = lit >> 1
            vals[lit] = UNDEF
            vals[lit ^ 1] = UNDEF
            self.phase[v] = 1 - (lit & 1)
            self.reason[v] = None
            heapq.heappush(self.heap, (-self.act[v], v))
        del trail[lim:]
        del self.trail_lim[blevel:]
        self.qhead = len(trail)

    def _attach_learnt(self, learnt: list[int], lbd: int) -> None:
        if len(learnt) == 1:
            self._assign(learnt[0], None)
        elif len(learnt) == 2:
            a, b = learnt
            self.bins[a ^ 1].append(b)
            self.bins[b ^ 1].append(a)
            self._assign(a, b)
        else:
            self.watches[learnt[0]].append(learnt)
            self.watches[learnt[1]].append(learnt)
            self.learnts.append(learnt)
            self.lbd[id(learnt)] = lbd
            self._assign(learnt[0], learnt)
        self.stats.learned += 1

    def _reduce_db(self) -> None:
        locked = set()
        for v in range(1, self.nvars + 1):
            r = self.reason[v]
            if r is not None and not isinstance(r, int):
                locked.add(id(r))
        keep_lbd = self.cfg.keep_lbd
        scored = []
        keep = []
        for c in self.learnts:
            cid = id(c)
            if cid in locked or self.lbd.get(cid, 99) <= keep_lbd:
                keep.append(c)
            else:
                scored.append(c)
        scored.sort(key=lambda c: (self.lbd.get(id(c), 99), len(c)))
        cut = len(scored) // 2
        dead = set(id(c) for c in scored[cut:])
        keep.extend(scored[:cut])
        if not dead:
            self.learnts = keep
            return
        for ws in self.watches:
            ws[:] = [c for c in ws if id(c) not in dead]
        for c in scored[cut:]:
            self.lbd.pop(id(c), None)
        self.learnts = keep

    # -- decisions -----------------------------------------------------------

    def _decide(self) -> int:
        vals = self.vals
        heap = self.heap
        while heap:
            negact, v = heapq.heappop(heap)
            if vals[v << 1] == UNDEF and -negact == self.act[v]:
                return (v << 1) | (0 if self.phase[v] else 1)
        for v in range(1, self.nvars + 1):
            if vals[v << 1] == UNDEF:
                return (v << 1) | (0 if self.phase[v] else 1)
        return -1

    # -- main ---------------------------------------------------------------

    def solve(self, assumptions: Sequence[int] = ()) -> SolveResult:
        t0 = time.time()
        cfg = self.cfg
        stats = self.stats
        # level-0 units: initial + assumptions (assumptions are permanent here)
        for lit in assumptions:
            self._units.append((abs(lit) << 1) | (lit < 0))
        for l in self._units:
            if self.vals[l] == FALSE:
                self.ok = False
            elif self.vals[l] == UNDEF:
                self._assign(l, None)
        if not self.ok:
            stats.elapsed = time.time() - t0
            return SolveResult("UNSAT", stats=stats)
        if self._propagate() is not None:
            stats.elapsed = time.time() - t0
            return SolveResult("UNSAT", stats=stats)

        for v in range(1, self.nvars + 1):
            if self.vals[v << 1] == UNDEF:
                heapq.heappush(self.heap, (-self.act[v], v))

        restart_idx = 0
        conflicts_until_restart = _luby(restart_idx) * cfg.restart_base
        next_reduce = cfg.reduce_base
        decay_inv = 1.0 / cfg.var_decay
        check_mask = 0xFFF

        while True:
            confl = self._propagate()
            if confl is not None:
                stats.conflicts += 1
                conflicts_until_restart -= 1
                if not self.trail_lim:
                    stats.elapsed = time.time() - t0
                    return SolveResult("UNSAT", stats=stats)
                learnt, blevel, lbd = self._analyze(confl)
                self._backjump(blevel)
                self._attach_learnt(learnt, lbd)
                self.var_inc *= decay_inv
                if stats.conflicts >= next_reduce:
                    self._reduce_db()
                    next_reduce += cfg.reduce_incr + cfg.reduce_incr * len(
                        range(0, stats.conflicts, max(cfg.reduce_base, 1)))
                if (stats.conflicts & check_mask) == 0:
                    if cfg.max_conflicts is not None and stats.conflicts >= cfg.max_conflicts:
                        stats.elapsed = time.time() - t0
                        return SolveResult("INDETERMINATE", stats=stats,
                                           budget={"conflicts": cfg.max_conflicts})
                    if cfg.max_seconds is not None and time.time() - t0 > cfg.max_seconds:
                        stats.elapsed = time.time() - t0
                        return SolveResult("INDETERMINATE", stats=stats,
                                           budget={"seconds": cfg.max_seconds})
                continue
            if cfg.max_conflicts is not None and stats.conflicts >= cfg.max_conflicts:
                stats.elapsed = time.time() - t0
                return SolveResult("INDETERMINATE", stats=stats,
                                   budget={"conflicts": cfg.max_conflicts})
            if conflicts_until_restart <= 0:
                stats.restarts += 1
                restart_idx += 1
                conflicts_until_restart = _luby(restart_idx) * cfg.restart_base
                if self.trail_lim:
                    self._backjump(0)
                continue
            lit = self._decide()
            if lit < 0:
                model = [False] * (self.nvars + 1)
                for v in range(1, self.nvars + 1):
                    model[v] = self.vals[v << 1] == TRUE
                stats.elapsed = time.time() - t0
                if not verify_model(self.cnf, model):
                    raise AssertionError("solver produced a bad model")
                return SolveResult("SAT", model=model, stats=stats)
            stats.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._assign(lit, None)


def solve_cnf(cnf: CnfFormula, config: Optional[SolverConfig] = None,
              assumptions: Sequence[int] = ()) -> SolveResult:
    return CdclSolver(cnf, config).solve(assumptions)


# -- DIMACS interchange ------------------------------------------------------

def export_dimacs(cnf: CnfFormula) -> bytes:
    out = [f"p cnf {cnf.num_vars} {len(cnf.clauses)}"]
    for c in cnf.clauses:
        out.append(" ".join(str(lit) for lit in c) + " 0")
    return ("\n".join(out) + "\n").encode("ascii")


def import_dimacs(data: bytes | str) -> CnfFormula:
    if isinstance(data, bytes):
        data = data.decode("ascii")
    num_vars = 0
    clauses: list[list[int]] = []
    cur: list[int] = []
    header_seen = False
    for line in data.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad DIMACS header: {line!r}")
            num_vars = int(parts[2])
            header_seen = True
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(cur)
                cur = []
            else:
                cur.append(lit)
    if not header_seen:
        raise ValueError("missing DIMACS header")
    if cur:
        clauses.append(cur)
    return CnfFormula(num_vars, clauses)


def import_model(stream: bytes | str, num_vars: int) -> Optional[list[bool]]:
    """Parse solver output in SAT-competition format.

    Returns a model list (indexed 1..num_vars) for SAT results, None for
    UNSAT; raises on malformed output.
    """
    if isinstance(stream, bytes):
        stream = stream.decode("ascii", errors="replace")
    verdict = None
    lits: list[int] = []
    for line in stream.splitlines():
        line = line.strip()
        if line.startswith("s "):
            tag = line[2:].strip().upper()
            if tag == "SATISFIABLE":
                verdict = "SAT"
            elif tag == "UNSATISFIABLE":
                verdict = "UNSAT"
            elif tag == "UNKNOWN":
                verdict = "UNKNOWN"
        elif line.startswith("v ") or line == "v":
            for tok in line[1:].split():
                lits.append(int(tok))
    if verdict == "UNSAT":
        return None
    if verdict != "SAT":
        raise ValueError(f"no usable verdict in solver output (got {verdict!r})")
    model = [False] * (num_vars + 1)
    for lit in lits:
        if lit == 0:
            continue
        v = abs(lit)
        if v <= num_vars:
            model[v] = lit > 0
    return model
