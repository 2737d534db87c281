"""Exact icosahedral geometry over Q(sqrt5).

The unit-edge icosahedron has vertices (0, +-t/2, +-1/2) and cyclic shifts,
with t the golden ratio; its circumradius squared is (5+sqrt5)/8.  Scaling
by 1/t turns the length-t chords into unit chords: that vertex set on the
smaller sphere is the great-icosahedron configuration.  Every symmetry of
either is one of 120 orthogonal matrices whose entries lie in Q(sqrt5)/2,
so the whole group and both vertex sets stay exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .field import FieldElement, QuadBasis

B5 = QuadBasis([5])


def _fe(rat=0, s5=0) -> FieldElement:
    """rat + s5*sqrt(5) as an exact field element."""
    return FieldElement.from_terms(B5, {(): Fraction(rat), (5,): Fraction(s5)})


ZERO = _fe()
ONE = _fe(1)
TAU = _fe(Fraction(1, 2), Fraction(1, 2))            # (1+sqrt5)/2
TAU_INV = _fe(Fraction(-1, 2), Fraction(1, 2))       # tau - 1 = 1/tau
HALF = _fe(Fraction(1, 2))

# circumradius^2 of the unit-edge icosahedron: (5+sqrt5)/8
R1_SQUARED = _fe(Fraction(5, 8), Fraction(1, 8))
# after scaling by 1/tau: r2^2 = r1^2/tau^2 = (5-sqrt5)/8
R2_SQUARED = _fe(Fraction(5, 8), Fraction(-1, 8))

ExactPoint = tuple[FieldElement, FieldElement, FieldElement]
ExactMatrix = tuple[ExactPoint, ExactPoint, ExactPoint]


def icosahedron_vertices_exact() -> list[ExactPoint]:
    """The 12 vertices (0, +-t/2, +-1/2) and cyclic coordinate shifts."""
    t2 = TAU * Fraction(1, 2)
    h = HALF
    out: list[ExactPoint] = []
    for s1 in (1, -1):
        for s2 in (1, -1):
            a = t2 * s1
            b = h * s2
            out.append((ZERO, a, b))
            out.append((a, b, ZERO))
            out.append((b, ZERO, a))
    return out


def scale_point(p: ExactPoint, f: FieldElement) -> ExactPoint:
    return (p[0] * f, p[1] * f, p[2] * f)


def dot(p: ExactPoint, q: ExactPoint) -> FieldElement:
    return p[0] * q[0] + p[1] * q[1] + p[2] * q[2]


def dist2(p: ExactPoint, q: ExactPoint) -> FieldElement:
    d = (p[0] - q[0], p[1] - q[1], p[2] - q[2])
    return dot(d, d)


def mat_apply(m: ExactMatrix, p: ExactPoint) -> ExactPoint:
    return (dot(m[0], p), dot(m[1], p), dot(m[2], p))


def mat_mul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    cols = tuple(zip(*b))
    return tuple(tuple(dot(row, col) for col in cols) for row in a)  # type: ignore


def mat_key(m: ExactMatrix) -> tuple:
    return tuple(e.key() for row in m for e in row)


def _check_orthogonal(m: ExactMatrix) -> bool:
    for i in range(3):
        for j in range(3):
            want = ONE if i == j else ZERO
            if dot(m[i], m[j]) != want:
                return False
    return True


def mat_det(m: ExactMatrix) -> FieldElement:
    a, b, c = m[0]
    d, e, f = m[1]
    g, h, i = m[2]
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def icosahedral_group() -> list[ExactMatrix]:
    """All 120 exact symmetries of the icosahedron (rotations and reflections)."""
    cyc: ExactMatrix = ((ZERO, ONE, ZERO), (ZERO, ZERO, ONE), (ONE, ZERO, ZERO))
    flip: ExactMatrix = ((-ONE, ZERO, ZERO), (ZERO, -ONE, ZERO), (ZERO, ZERO, ONE))
    h = Fraction(1, 2)
    # rotation by 2*pi/5 about the vertex axis (0, t/2, 1/2)
    r5: ExactMatrix = (
        (TAU_INV * h, -HALF, TAU * h),
        (HALF, TAU * h, TAU_INV * h),
        (-TAU * h, TAU_INV * h, HALF),
    )
    neg: ExactMatrix = ((-ONE, ZERO, ZERO), (ZERO, -ONE, ZERO), (ZERO, ZERO, -ONE))
    for g in (cyc, flip, r5):
        if not _check_orthogonal(g):
            raise AssertionError("generator is not orthogonal")
    verts = icosahedron_vertices_exact()
    vkeys = {tuple(c.key() for c in v) for v in verts}
    group: dict[tuple, ExactMatrix] = {}
    frontier = [cyc, flip, r5, neg]
    for m in frontier:
        group[mat_key(m)] = m
    while frontier:
        new_frontier = []
        for m in frontier:
            for g in (cyc, flip, r5, neg):
                prod = mat_mul(m, g)
                k = mat_key(prod)
                if k not in group:
                    group[k] = prod
                    new_frontier.append(prod)
        frontier = new_frontier
        if len(group) > 120:
            raise AssertionError("icosahedral closure exceeded 120 elements")
    mats = list(group.values())
    if len(mats) != 120:
        raise AssertionError(f"expected 120 symmetries, got {len(mats)}")
    for m in mats:
        for v in verts:
            img = mat_apply(m, v)
            if tuple(c.key() for c in img) not in vkeys:
                raise AssertionError("group element does not preserve the vertex set")
    return mats


def unit_edges(points: Iterable[ExactPoint]) -> list[tuple[int, int]]:
    """Pairs at exact squared distance 1."""
    pts = list(points)
    out = []
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if dist2(pts[i], pts[j]) == ONE:
                out.append((i, j))
    return out
