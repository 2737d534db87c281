import random

import pytest
from hypothesis import given, settings, strategies as st

from udg5.catalog import moser_spindle_points
from udg5.graphs import (AbstractGraph, DegreeStats, IndependenceCapError,
                         UnitDistanceGraph, build_udg_plane, graph_radius,
                         independence_number, independence_number_bruteforce,
                         prune_min_degree, to_graph6, udg_dumps, udg_loads)


def moser_udg():
    return build_udg_plane(moser_spindle_points())


def test_build_udg_plane_counts():
    g = moser_udg()
    assert g.n == 7 and g.num_edges == 11
    stats = g.degree_stats()
    assert stats.min == 3 and stats.max == 4
    assert sum(stats.histogram.values()) == 7
    assert sum(k * v for k, v in stats.histogram.items()) == 22


def test_duplicate_points_rejected():
    pts = moser_spindle_points()
    with pytest.raises(ValueError):
        build_udg_plane(pts + [pts[0]])


def test_build_udg_order_independent():
    pts = moser_spindle_points()
    g1 = build_udg_plane(pts)
    rng = random.Random(4)
    perm = list(range(len(pts)))
    rng.shuffle(perm)
    g2 = build_udg_plane([pts[i] for i in perm])
    assert g1.num_edges == g2.num_edges
    assert sorted(g1.degree_stats().histogram.items()) == \
        sorted(g2.degree_stats().histogram.items())


def test_prune_min_degree():
    # path: pruning at 2 eats everything
    g = UnitDistanceGraph("plane", list(moser_spindle_points()),
                          [(0, 1), (1, 2), (2, 3)])
    assert prune_min_degree(g, 2).n == 0
    m = moser_udg()
    assert prune_min_degree(m, 3).n == 7      # fixed point
    assert prune_min_degree(m, 0).n == 7
    with pytest.raises(ValueError):
        prune_min_degree(m, -1)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 10), st.floats(0.1, 0.9), st.integers(0, 4))
def test_prune_properties(n, p, dmin):
    rng = random.Random(int(p * 1000) + n)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    g = UnitDistanceGraph("plane", list(range(n)), edges)
    once = prune_min_degree(g, dmin)
    twice = prune_min_degree(once, dmin)
    assert once.n == twice.n and once.edges == twice.edges  # idempotent
    if once.n:
        assert once.degree_stats().min >= dmin
    harder = prune_min_degree(g, dmin + 1)
    assert harder.n <= once.n  # monotone


def test_radius():
    m = moser_udg().abstract()
    assert graph_radius(m) == 2
    k2 = AbstractGraph(2, [(0, 1)])
    assert graph_radius(k2) == 1
    with pytest.raises(ValueError):
        graph_radius(AbstractGraph(3, [(0, 1)]))


def test_independence():
    m = moser_udg().abstract()
    assert independence_number(m) == 2
    assert independence_number_bruteforce(m) == 2
    k2 = AbstractGraph(2, [(0, 1)])
    assert independence_number(k2) == 1
    with pytest.raises(IndependenceCapError):
        independence_number(AbstractGraph(70, []), cap=64)
    rng = random.Random(3)
    for _ in range(50):
        n = rng.randint(1, 14)
        g = AbstractGraph(n, [(i, j) for i in range(n) for j in range(i + 1, n)
                              if rng.random() < 0.45])
        assert independence_number(g) == independence_number_bruteforce(g)


def test_graph6():
    k4 = AbstractGraph(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])
    assert to_graph6(k4) == "C~"
    p3 = AbstractGraph(3, [(0, 1), (1, 2)])
    assert to_graph6(p3) == "Bg"
    k3 = AbstractGraph(3, [(0, 1), (0, 2), (1, 2)])
    assert to_graph6(k3) == "Bw"


def test_json_round_trip_plane():
    g = moser_udg()
    g.labels = [0] + [1] * 6
    h = udg_loads(udg_dumps(g))
    assert h.n == g.n and h.edges == g.edges and h.labels == g.labels
    assert all(a == b for a, b in zip(g.vertices, h.vertices))


def test_json_round_trip_sphere():
    from udg5.sphere import SphereSpec, build_udg_sphere, icosahedron_vertices
    spec = SphereSpec.r1()
    g = build_udg_sphere(icosahedron_vertices(spec), spec)
    h = udg_loads(udg_dumps(g))
    assert h.n == 12 and h.edges == g.edges
    # coordinates survive with plenty of precision
    for a, b in zip(g.vertices, h.vertices):
        assert abs(a.x.mid_float() - b.x.mid_float()) < 1e-30
