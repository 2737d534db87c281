import random

from udg5.catalog import golomb_points, l91_points, moser_spindle_points
from udg5.graphs import AbstractGraph, build_udg_plane
from udg5.rigidity import (FLEXIBLE, MINIMALLY_RIGID, RIGID_OVERBRACED,
                           laman_check, rigidity_rank)


def test_basic_classes():
    k4 = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    assert laman_check(4, k4) == RIGID_OVERBRACED
    assert laman_check(3, [(0, 1), (1, 2)]) == FLEXIBLE
    assert laman_check(3, [(0, 1), (1, 2), (0, 2)]) == MINIMALLY_RIGID
    assert laman_check(2, [(0, 1)]) == MINIMALLY_RIGID
    # 4-cycle flexes
    assert laman_check(4, [(0, 1), (1, 2), (2, 3), (3, 0)]) == FLEXIBLE


def test_catalog_graphs_minimally_rigid():
    for pts in (moser_spindle_points(), l91_points()):
        g = build_udg_plane(pts)
        assert laman_check(g.n, g.edges) == MINIMALLY_RIGID
    golomb = build_udg_plane(golomb_points())
    assert laman_check(golomb.n, golomb.edges) == RIGID_OVERBRACED


def test_minimally_rigid_loses_rigidity_per_edge():
    g = build_udg_plane(moser_spindle_points())
    for drop in range(g.num_edges):
        edges = [e for i, e in enumerate(g.edges) if i != drop]
        assert laman_check(g.n, edges) == FLEXIBLE


def test_rank_matches_edge_independence():
    # K4 plus a degree-2 vertex: rank-full but the K4 block is over-braced
    edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4), (2, 4)]
    assert rigidity_rank(5, edges) == 7
    assert laman_check(5, edges) == RIGID_OVERBRACED


def test_random_counts_consistency():
    rng = random.Random(17)
    for _ in range(60):
        n = rng.randint(3, 12)
        edges = [(i, j) for i in range(n) for j in range(i + 1, n)
                 if rng.random() < 0.5]
        g = AbstractGraph(n, edges)
        if not g.is_connected():
            continue
        rank = rigidity_rank(n, g.edges)
        cls = laman_check(n, g.edges)
        assert rank <= 2 * n - 3
        if cls == MINIMALLY_RIGID:
            assert rank == len(g.edges) == 2 * n - 3
        elif cls == RIGID_OVERBRACED:
            assert rank == 2 * n - 3 and len(g.edges) > rank
        else:
            assert rank < 2 * n - 3
