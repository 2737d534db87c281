"""Generic planar rigidity via the (2,3)-pebble game.

A graph is minimally rigid (Laman) in the plane iff |E| = 2|V| - 3 and no
subgraph is over-braced (|E'| <= 2|V'| - 3 throughout).  The pebble game
computes the rank of the rigidity matroid: every independent edge consumes a
pebble, and an edge insertion fails exactly when it would over-brace.
"""

from __future__ import annotations

from typing import Iterable, Sequence

MINIMALLY_RIGID = "minimally-rigid"
RIGID_OVERBRACED = "rigid-overbraced"
FLEXIBLE = "flexible"


class _PebbleGame:
    """The (2,3)-pebble game of Lee and Streinu for 2D generic rigidity."""

    def __init__(self, n: int):
        self.n = n
        self.pebbles = [2] * n
        self.out: list[set[int]] = [set() for _ in range(n)]  # directed edges

    def _collect(self, root: int, need: int, avoid: int) -> bool:
        """Try to raise root's pebble count to `need` by reversing paths."""
        while self.pebbles[root] < need:
            # DFS for a vertex with a free pebble, avoiding `avoid`
            seen = [False] * self.n
            seen[root] = True
            seen[avoid] = True
            stack = [root]
            parent = {}
            found = -1
            while stack:
                u = stack.pop()
                for w in self.out[u]:
                    if not seen[w]:
                        seen[w] = True
                        parent[w] = u
                        if self.pebbles[w] > 0:
                            found = w
                            stack = []
                            break
                        stack.append(w)
            if found < 0:
                return False
            # reverse the path root -> ... -> found
            w = found
            self.pebbles[w] -= 1
            while w != root:
                u = parent[w]
                self.out[u].remove(w)
                self.out[w].add(u)
                w = u
            self.pebbles[root] += 1
        return True

    def try_insert(self, u: int, v: int) -> bool:
        """Insert edge (u,v) if it is independent; returns success."""
        # need 4 pebbles on {u, v} (2 + 3 rule: keep 3 across both endpoints
        # plus 1 to consume), i.e. 2 on u and 2 on v
        if not self._collect(u, 2, v):
            return False
        if not self._collect(v, 2, u):
            return False
        if self.pebbles[u] + self.pebbles[v] < 4:
            return False
        self.pebbles[u] -= 1
        self.out[u].add(v)
        return True


def rigidity_rank(n: int, edges: Iterable[tuple[int, int]]) -> int:
    """Rank of the edge set in the 2D generic rigidity matroid."""
    game = _PebbleGame(n)
    rank = 0
    for (u, v) in edges:
        if u == v:
            continue
        if game.try_insert(u, v):
            rank += 1
    return rank


def laman_check(n: int, edges: Sequence[tuple[int, int]]) -> str:
    """Classify a connected graph: minimally-rigid, rigid-overbraced, flexible."""
    if n < 2:
        return MINIMALLY_RIGID
    m = len(set((min(u, v), max(u, v)) for u, v in edges if u != v))
    if n == 2:
        return MINIMALLY_RIGID if m == 1 else FLEXIBLE
    rank = rigidity_rank(n, edges)
    rigid = rank == 2 * n - 3
    if rigid and m == 2 * n - 3:
        return MINIMALLY_RIGID
    if rigid:
        return RIGID_OVERBRACED
    return FLEXIBLE
