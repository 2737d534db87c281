"""Graph containers and structural algorithms for unit-distance graphs.

UnitDistanceGraph carries coordinate payloads (exact plane points or
certified sphere points) together with the edge list that the geometry's
decision procedure certified.  AbstractGraph is the coordinate-free view
used by coloring, rigidity and independence computations.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Union

from .field import AlgebraicComplex


@dataclass
class DegreeStats:
    histogram: dict[int, int]
    min: int
    max: int

    @staticmethod
    def of(n: int, edges: Sequence[tuple[int, int]]) -> "DegreeStats":
        deg = [0] * n
        for u, v in edges:
            deg[u] += 1
            deg[v] += 1
        hist: dict[int, int] = {}
        for d in deg:
            hist[d] = hist.get(d, 0) + 1
        return DegreeStats(hist, min(deg) if deg else 0, max(deg) if deg else 0)


class AbstractGraph:
    """A simple graph on vertices 0..n-1."""

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        self.n = n
        es = set()
        for u, v in edges:
            if u == v:
                raise ValueError("self-loop")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError("vertex index out of range")
            es.add((min(u, v), max(u, v)))
        self.edges: list[tuple[int, int]] = sorted(es)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def adjacency_masks(self) -> list[int]:
        msk = [0] * self.n
        for u, v in self.edges:
            msk[u] |= 1 << v
            msk[v] |= 1 << u
        return msk

    def degree_stats(self) -> DegreeStats:
        return DegreeStats.of(self.n, self.edges)

    def without_vertex(self, v: int) -> "AbstractGraph":
        remap = {}
        k = 0
        for u in range(self.n):
            if u != v:
                remap[u] = k
                k += 1
        return AbstractGraph(self.n - 1, [(remap[a], remap[b])
                                          for a, b in self.edges
                                          if a != v and b != v])

    def without_vertices(self, vs: Iterable[int]) -> "AbstractGraph":
        dead = set(vs)
        remap = {}
        k = 0
        for u in range(self.n):
            if u not in dead:
                remap[u] = k
                k += 1
        return AbstractGraph(k, [(remap[a], remap[b]) for a, b in self.edges
                                 if a not in dead and b not in dead])

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        adj = self.adjacency()
        seen = [False] * self.n
        seen[0] = True
        q = deque([0])
        count = 1
        while q:
            u = q.popleft()
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    count += 1
                    q.append(w)
        return count == self.n

    def __repr__(self) -> str:
        return f"AbstractGraph(n={self.n}, m={self.num_edges})"


def graph_radius(g: AbstractGraph) -> int:
    """min over u of max over v of d(u, v); errors if disconnected."""
    if g.n == 0:
        raise ValueError("empty graph")
    adj = g.adjacency()
    best = None
    for s in range(g.n):
        dist = [-1] * g.n
        dist[s] = 0
        q = deque([s])
        ecc = 0
        reached = 1
        while q:
            u = q.popleft()
            for w in adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    ecc = max(ecc, dist[w])
                    reached += 1
                    q.append(w)
        if reached != g.n:
            raise ValueError("graph is disconnected")
        best = ecc if best is None else min(best, ecc)
    return best


class IndependenceCapError(ValueError):
    pass


def independence_number(g: AbstractGraph, cap: int = 64) -> int:
    """Exact maximum independent set size (branch and bound, bitmasks)."""
    if g.n > cap:
        raise IndependenceCapError(f"{g.n} vertices exceeds cap {cap}")
    if g.n == 0:
        return 0
    adj = g.adjacency_masks()
    best = 0
    full = (1 << g.n) - 1

    def bnb(mask: int, size: int) -> None:
        nonlocal best
        if size + bin(mask).count("1") <= best:
            return
        if mask == 0:
            best = max(best, size)
            return
        # branch on a max-degree vertex within mask
        v = -1
        dmax = -1
        m = mask
        while m:
            b = m & -m
            u = b.bit_length() - 1
            d = bin(adj[u] & mask).count("1")
            if d > dmax:
                dmax = d
                v = u
            m ^= b
        if dmax <= 1:
            # remaining graph is a matching plus isolated vertices
            comp = size
            mm = mask
            while mm:
                b = mm & -mm
                u = b.bit_length() - 1
                mm ^= b
                comp += 1
                mm &= ~adj[u]
            best = max(best, comp)
            return
        bnb(mask & ~(1 << v) & ~adj[v], size + 1)  # take v
        bnb(mask & ~(1 << v), size)                # skip v
    bnb(full, 0)
    return best


def independence_number_bruteforce(g: AbstractGraph) -> int:
    """Independent oracle: enumerate all subsets (n <= 24)."""
    if g.n > 24:
        raise ValueError("brute force limited to 24 vertices")
    adj = g.adjacency_masks()
    best = 0
    for s in range(1 << g.n):
        ok = True
        m = s
        while m:
            b = m & -m
            u = b.bit_length() - 1
            if adj[u] & s:
                ok = False
                break
            m ^= b
        if ok:
            best = max(best, bin(s).count("1"))
    return best


# -- unit distance graphs -----------------------------------------------------


class UnitDistanceGraph:
    """A geometric graph whose edges are certified unit-distance pairs."""

    def __init__(self, geometry, vertices: list, edges: Iterable[tuple[int, int]],
                 labels: Optional[list[int]] = None):
        self.geometry = geometry  # "plane" or a sphere.SphereSpec
        self.vertices = vertices
        es = set()
        n = len(vertices)
        for u, v in edges:
            if u == v:
                raise ValueError("self-loop")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError("edge endpoint out of range")
            es.add((min(u, v), max(u, v)))
        self.edges: list[tuple[int, int]] = sorted(es)
        self.labels = labels

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def abstract(self) -> AbstractGraph:
        return AbstractGraph(self.n, self.edges)

    def degree_stats(self) -> DegreeStats:
        return DegreeStats.of(self.n, self.edges)

    def induced(self, keep: Sequence[int]) -> "UnitDistanceGraph":
        keep = list(keep)
        remap = {old: new for new, old in enumerate(keep)}
        verts = [self.vertices[i] for i in keep]
        edges = [(remap[u], remap[v]) for u, v in self.edges
                 if u in remap and v in remap]
        labels = [self.labels[i] for i in keep] if self.labels else None
        return UnitDistanceGraph(self.geometry, verts, edges, labels)

    def __repr__(self) -> str:
        return f"UnitDistanceGraph({self.geometry}, n={self.n}, m={self.num_edges})"


def prune_min_degree(g: UnitDistanceGraph, dmin: int) -> UnitDistanceGraph:
    """Iteratively delete vertices of degree < dmin; unique maximal result."""
    if dmin < 0:
        raise ValueError("dmin must be >= 0")
    n = g.n
    deg = [0] * n
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in g.edges:
        deg[u] += 1
        deg[v] += 1
        adj[u].append(v)
        adj[v].append(u)
    alive = [True] * n
    stack = [v for v in range(n) if deg[v] < dmin]
    while stack:
        v = stack.pop()
        if not alive[v]:
            continue
        alive[v] = False
        for w in adj[v]:
            if alive[w]:
                deg[w] -= 1
                if deg[w] < dmin:
                    stack.append(w)
    keep = [v for v in range(n) if alive[v]]
    return g.induced(keep)


def build_udg_plane(points: Sequence[AlgebraicComplex]) -> UnitDistanceGraph:
    """Unit-distance graph on exact plane points.

    Uses a float prefilter to propose candidate pairs, then certifies each
    candidate by exact field arithmetic.  The prefilter window (1e-6) is far
    wider than the float evaluation error of these bounded-height algebraic
    coordinates, so no unit pair can escape it.
    """
    import numpy as np

    pts = list(points)
    n = len(pts)
    seen: dict = {}
    for i, p in enumerate(pts):
        k = p.key()
        if k in seen:
            raise ValueError(f"duplicate points at indices {seen[k]} and {i}")
        seen[k] = i
    arr = np.array([complex(p) for p in pts])
    edges = []
    B = 2048
    for i0 in range(0, n, B):
        d2 = np.abs(arr[i0:i0 + B, None] - arr[None, :]) ** 2
        ii, jj = np.nonzero(np.abs(d2 - 1.0) < 1e-6)
        for a, b in zip(ii.tolist(), jj.tolist()):
            i = i0 + a
            if i < b:
                diff = pts[i] - pts[b]
                if diff.norm2() == 1:
                    edges.append((i, b))
    return UnitDistanceGraph("plane", pts, edges)


def build_udg(points: Sequence, geometry="plane", **kwargs) -> UnitDistanceGraph:
    """Build udg(V): edges are exactly the certified unit-distance pairs."""
    if geometry == "plane":
        return build_udg_plane(points)
    # sphere geometry: defer to the sphere module's certified builder
    from . import sphere as _sphere
    return _sphere.build_udg_sphere(points, geometry, **kwargs)


def ball_induced_subgraph(g: UnitDistanceGraph, size: int,
                          seed: int = 0) -> UnitDistanceGraph:
    """Subgraph induced by the `size` vertices nearest a random center.

    The center is a randomly chosen vertex position; distances use float
    coordinates (selection only; edges stay certified from the parent).
    """
    import numpy as np

    rng = np.random.default_rng(seed)
    if g.geometry == "plane":
        pts = np.array([complex(v) for v in g.vertices])
        center = pts[rng.integers(0, g.n)]
        order = np.argsort(np.abs(pts - center))
    else:
        pts = np.array([v.mid() for v in g.vertices])
        center = pts[rng.integers(0, g.n)]
        order = np.argsort(((pts - center) ** 2).sum(axis=1))
    return g.induced(sorted(int(i) for i in order[:size]))


# -- serialization -------------------------------------------------------------


def udg_to_json(g: UnitDistanceGraph) -> dict:
    if g.geometry == "plane":
        geo = "plane"
        verts = [_plane_vertex_json(p) for p in g.vertices]
    else:
        geo = {"sphere": g.geometry.to_json()}
        verts = [p.to_json() for p in g.vertices]
    out = {"geometry": geo, "vertices": verts, "edges": [list(e) for e in g.edges]}
    if g.labels is not None:
        out["classes"] = list(g.labels)
    return out


def _plane_vertex_json(p) -> dict:
    from .plane import ExtendedComplex
    if isinstance(p, AlgebraicComplex):
        return p.to_json()
    if isinstance(p, ExtendedComplex):
        return p.to_json()
    raise TypeError(f"unsupported plane vertex payload {type(p)}")


def udg_from_json(obj: dict) -> UnitDistanceGraph:
    edges = [tuple(e) for e in obj["edges"]]
    labels = obj.get("classes")
    if obj["geometry"] == "plane":
        verts = []
        for v in obj["vertices"]:
            if "ext" in v:
                from .plane import ExtendedComplex
                verts.append(ExtendedComplex.from_json(v))
            else:
                verts.append(AlgebraicComplex.from_json(v))
        return UnitDistanceGraph("plane", verts, edges, labels)
    from . import sphere as _sphere
    spec = _sphere.SphereSpec.from_json(obj["geometry"]["sphere"])
    verts = [_sphere.CertifiedPoint3.from_json(v, spec.bits) for v in obj["vertices"]]
    return UnitDistanceGraph(spec, verts, edges, labels)


def udg_dumps(g: UnitDistanceGraph) -> str:
    return json.dumps(udg_to_json(g), separators=(",", ":"), sort_keys=True)


def udg_loads(text: str) -> UnitDistanceGraph:
    return udg_from_json(json.loads(text))


# -- graph6 --------------------------------------------------------------------


def to_graph6(g: Union[AbstractGraph, UnitDistanceGraph]) -> str:
    """Standard graph6 encoding of the abstract structure."""
    if isinstance(g, UnitDistanceGraph):
        g = g.abstract()
    n = g.n
    if n > 258047:
        raise ValueError("graph too large for this graph6 writer")
    if n <= 62:
        head = chr(n + 63)
    else:
        head = chr(126) + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    adj = set(g.edges)
    bits = []
    for j in range(1, n):
        for i in range(j):
            bits.append(1 if (i, j) in adj else 0)
    while len(bits) % 6:
        bits.append(0)
    chars = []
    for i in range(0, len(bits), 6):
        val = 0
        for b in bits[i:i + 6]:
            val = (val << 1) | b
        chars.append(chr(val + 63))
    return head + "".join(chars)
