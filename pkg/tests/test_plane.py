import math
from fractions import Fraction as Fr

import pytest

from udg5.field import AlgebraicComplex, FieldElement, QuadBasis
from udg5.packed import PackedPoints, unit_pairs_between, unit_pairs_within
from udg5.plane import (CandidateSweep, ExtendedComplex, PointSetM, assemble_w,
                        build_m1, build_stages, canonical_rotation,
                        count_new_edges_exact, enumerate_candidates,
                        minkowski_clip_step, moser_subgraph_screen,
                        pair_source_indices, psi_in_basis, series_presets,
                        solve_unit_rotations)


@pytest.fixture(scope="module")
def s1():
    pres = series_presets(1)
    return pres, build_stages(pres, 2, 3, [Fr(1), None])


def test_presets():
    for series, k in ((1, 6), (2, 24)):
        pres = series_presets(series)
        assert pres.k == k
        assert pres.phi0 ** k == AlgebraicComplex.one(pres.basis)
        assert all((pres.phi0 ** j) != AlgebraicComplex.one(pres.basis)
                   for j in range(1, k))
        for g in pres.generators:
            assert g.norm2() == FieldElement.one(pres.basis)
    with pytest.raises(ValueError):
        series_presets(3)


def test_m1_sizes(s1):
    pres, (M1, M2, M3) = s1
    assert len(M1) == 31
    assert len(M2) == 151
    assert len(M3) == 1939
    m0 = build_m1(pres, 0)
    assert len(m0) == pres.k + 1
    with pytest.raises(ValueError):
        build_m1(pres, -1)


def test_m1_points_unit_norm(s1):
    pres, (M1, _, _) = s1
    one = FieldElement.one(pres.basis)
    assert M1.points[0].is_zero()
    for p in M1.points[1:]:
        assert p.norm2() == one


def test_phi0_symmetry_exact(s1):
    pres, stages = s1
    for M in stages:
        keys = M.key_set()
        rotated = {(p * pres.phi0).key() for p in M.points}
        assert rotated == keys
        conjugated = {p.conj().key() for p in M.points}
        assert conjugated == keys


def test_minkowski_identity(s1):
    pres, (M1, M2, M3) = s1
    zero_only = PointSetM(pres, [AlgebraicComplex.zero(pres.basis)], 1, [None])
    same = minkowski_clip_step(M2, zero_only, None)
    assert same.key_set() == M2.key_set()


def test_clip_keeps_boundary(s1):
    pres, (M1, M2, _) = s1
    one = FieldElement.one(pres.basis)
    boundary = [p for p in M2.points[1:] if p.norm2() == one]
    assert len(boundary) == 30  # all of M1's circle survives a radius-1 clip


def test_solve_unit_rotations(s1):
    pres, _ = s1
    basis = pres.basis
    two = AlgebraicComplex.make(basis, {(): Fr(2)}, {})
    one = AlgebraicComplex.one(basis)
    three = AlgebraicComplex.make(basis, {(): Fr(3)}, {})
    sols = solve_unit_rotations(two, two)
    assert len(sols) == 2
    vals = sorted((s.float_re(), s.float_im()) for s in sols)
    assert abs(vals[1][0] - 0.875) < 1e-12
    assert abs(vals[1][1] - math.sqrt(15) / 8) < 1e-12
    assert all(s.in_field for s in sols)       # sqrt(15) absorbed into the basis
    sols = solve_unit_rotations(one, one)
    assert sorted(round(s.float_im(), 12) for s in sols) == \
        [round(-math.sqrt(3) / 2, 12), round(math.sqrt(3) / 2, 12)]
    assert solve_unit_rotations(three, one) == []
    with pytest.raises(ValueError):
        solve_unit_rotations(AlgebraicComplex.zero(basis), one)


def test_solution_verified_by_substitution(s1):
    pres, (M1, _, M3) = s1
    z = M3.points[40]
    w = M3.points[77]
    for psi in solve_unit_rotations(z, w):
        d = ExtendedComplex.from_algebraic(z.embed(psi.re.a.basis)) - \
            psi * z.embed(psi.re.a.basis) * 0 if False else None
        u = ExtendedComplex.from_algebraic(z.embed(psi.re.a.basis))
        v = ExtendedComplex.from_algebraic(w.embed(psi.re.a.basis))
        diff = u - psi * v
        n2 = diff.norm2()
        assert n2.is_in_field()
        assert n2.as_field() == FieldElement.one(psi.re.a.basis)


def test_canonical_rotation(s1):
    pres, _ = s1
    basis = pres.basis
    two = AlgebraicComplex.make(basis, {(): Fr(2)}, {})
    psi = solve_unit_rotations(two, two)[1]   # conjugate branch
    canon, p, conj = canonical_rotation(psi, pres)
    th = math.atan2(canon.float_im(), canon.float_re())
    assert -1e-12 <= th <= math.pi / pres.k + 1e-12
    assert abs(canon.float_im() - 0.4841229182) < 1e-9


def test_packed_matches_field(s1):
    pres, (M1, M2, _) = s1
    packed = M2.packed()
    for i in (0, 3, 50, 150):
        assert packed.point(i) == M2.points[i]
    inner = unit_pairs_within(M2.packed_nonzero())
    # brute-force comparison on the 150 nonzero points
    pts = M2.points[1:]
    expected = set()
    one = FieldElement.one(pres.basis)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if (pts[i] - pts[j]).norm2() == one:
                expected.add((i, j))
    assert set(inner) == expected


def test_packed_rotate_exact(s1):
    pres, (M1, _, _) = s1
    rot = M1.packed_nonzero().rotate(pres.phi0)
    for i in range(rot.n):
        assert rot.point(i) == M1.points[1 + i] * pres.phi0


def test_pair_sources(s1):
    pres, (_, _, M3) = s1
    ext = pair_source_indices(M3, "extreme")
    assert len(ext) == len(M3) - 1
    real = pair_source_indices(M3, "real")
    assert all(M3.points[1 + i].im.is_zero() and M3.points[1 + j].im.is_zero()
               for i, j in real)
    with pytest.raises(ValueError):
        pair_source_indices(M3, "bogus")


def test_assemble_w_structure(s1):
    pres, (_, _, M3) = s1
    basis = pres.basis
    two = AlgebraicComplex.make(basis, {(): Fr(2)}, {})
    psi = canonical_rotation(solve_unit_rotations(two, two)[0], pres)[0]
    W = assemble_w(M3, psi)
    assert W.n == 2 * len(M3) - 1
    new = [e for e in W.edges if W.labels[e[0]] and W.labels[e[1]]
           and W.labels[e[0]] != W.labels[e[1]]]
    assert len(new) == 66
    common = len(W.edges) - len(new)
    assert common == 26748
    # psi = 1 degenerates to a single copy: W = udg(M_s)
    one_rot = ExtendedComplex.from_algebraic(AlgebraicComplex.one(basis))
    W1 = assemble_w(M3, one_rot)
    assert W1.n == len(M3)
    assert W1.num_edges == 13374


def test_moser_screen(s1):
    pres2 = series_presets(2)
    # the excluded rotation itself must fail the screen
    b11 = QuadBasis([2, 3, 11])
    bad = ExtendedComplex.from_algebraic(AlgebraicComplex.make(
        b11, {(): Fr(5, 6)}, {(11,): Fr(1, 6)}))
    assert moser_subgraph_screen(bad, pres2) is False
    # winner 10 passes and lies in the no-sqrt11 field
    two = AlgebraicComplex.make(pres2.basis, {(): Fr(2)}, {})
    psi = canonical_rotation(solve_unit_rotations(two, two)[0], pres2)[0]
    assert moser_subgraph_screen(psi, pres2) is True
    assert psi_in_basis(psi, [2, 3, 5])
    assert not psi_in_basis(bad, [2, 3, 5])
