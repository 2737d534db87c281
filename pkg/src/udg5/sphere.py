"""Certified constructions on two-dimensional spheres.

Vertex coordinates are dyadic intervals (exact golden-ratio points where
available), edge-gluing isometries are interval orthogonal matrices, and
every unit-distance decision is certified: an edge needs |d^2 - 1| enclosed
below 2^-64, a non-edge needs the enclosure to exclude 1, and anything
undecidable at the precision cap is a hard error, never a guess.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

from . import icosa
from .field import FieldElement
from .graphs import AbstractGraph, UnitDistanceGraph, prune_min_degree
from .interval import DyadicInterval, di_one, to_interval

IV3 = tuple[DyadicInterval, DyadicInterval, DyadicInterval]
EDGE_TOL_LOG2 = -64          # |d^2-1| certified below this => edge
MERGE_TOL_LOG2 = -100        # coordinate diffs certified below this => same point
MAX_BITS = 512


@dataclass(frozen=True)
class SphereSpec:
    """A sphere radius, exact when it is one of the two icosahedral radii."""

    tag: str                              # "r1", "r2" or "custom"
    r2_exact: Optional[FieldElement]      # exact squared radius, if available
    bits: int = 288

    @staticmethod
    def r1(bits: int = 288) -> "SphereSpec":
        return SphereSpec("r1", icosa.R1_SQUARED, bits)

    @staticmethod
    def r2(bits: int = 288) -> "SphereSpec":
        return SphereSpec("r2", icosa.R2_SQUARED, bits)

    @staticmethod
    def custom(radius_squared: Union[Fraction, FieldElement],
               bits: int = 288) -> "SphereSpec":
        if isinstance(radius_squared, Fraction):
            from .field import QuadBasis
            radius_squared = FieldElement.from_rational(QuadBasis([5]), radius_squared)
        return SphereSpec("custom", radius_squared, bits)

    def radius_squared_interval(self, bits: Optional[int] = None) -> DyadicInterval:
        b = bits or self.bits
        if self.r2_exact is None:
            raise ValueError("sphere has no radius value")
        iv = to_interval(self.r2_exact, b)
        if float(iv) <= 0.25:
            raise ValueError("radius must exceed 1/2 for unit chords to exist")
        return iv

    def to_json(self) -> dict:
        names = {"r1": "cos(pi/10)", "r2": "cos(3pi/10)"}
        out = {"bits": self.bits}
        if self.tag in names:
            out["radius"] = names[self.tag]
        else:
            iv = self.radius_squared_interval().sqrt()
            out["radius"] = iv.decimal_str(20)
        return out

    @staticmethod
    def from_json(obj: dict) -> "SphereSpec":
        bits = obj.get("bits", 288)
        r = obj["radius"]
        if r == "cos(pi/10)":
            return SphereSpec.r1(bits)
        if r == "cos(3pi/10)":
            return SphereSpec.r2(bits)
        raise ValueError(f"cannot rebuild custom sphere from {r!r}")


class CertifiedPoint3:
    """A sphere point with interval coordinates and construction provenance."""

    __slots__ = ("x", "y", "z", "provenance", "exact")

    def __init__(self, x: DyadicInterval, y: DyadicInterval, z: DyadicInterval,
                 provenance: str = "", exact: Optional[icosa.ExactPoint] = None):
        self.x = x
        self.y = y
        self.z = z
        self.provenance = provenance
        self.exact = exact

    @staticmethod
    def from_exact(p: icosa.ExactPoint, bits: int, provenance: str = "",
                   ) -> "CertifiedPoint3":
        return CertifiedPoint3(to_interval(p[0], bits), to_interval(p[1], bits),
                              to_interval(p[2], bits), provenance, exact=p)

    def coords(self) -> IV3:
        return (self.x, self.y, self.z)

    def mid(self) -> tuple[float, float, float]:
        return (self.x.mid_float(), self.y.mid_float(), self.z.mid_float())

    def norm2(self) -> DyadicInterval:
        return self.x.square() + self.y.square() + self.z.square()

    def dist2(self, other: "CertifiedPoint3") -> DyadicInterval:
        return ((self.x - other.x).square() + (self.y - other.y).square()
                + (self.z - other.z).square())

    def width_log2(self) -> float:
        return max(self.x.width_log2(), self.y.width_log2(), self.z.width_log2())

    def to_json(self) -> dict:
        places = 40
        return {"x": self.x.decimal_str(places), "y": self.y.decimal_str(places),
                "z": self.z.decimal_str(places), "provenance": self.provenance}

    @staticmethod
    def from_json(obj: dict, bits: int) -> "CertifiedPoint3":
        def parse(s: str) -> DyadicInterval:
            body = s.split("@")[0].strip("[]")
            lo, hi = body.split(",")
            return DyadicInterval.from_bounds(
                Fraction(lo).limit_denominator(10 ** 60),
                Fraction(hi).limit_denominator(10 ** 60), bits)
        return CertifiedPoint3(parse(obj["x"]), parse(obj["y"]), parse(obj["z"]),
                              obj.get("provenance", ""))

    def __repr__(self) -> str:
        x, y, z = self.mid()
        return f"CertifiedPoint3({x:.6f}, {y:.6f}, {z:.6f})"


@dataclass
class SphereIsometry:
    """3x3 interval orthogonal matrix with orientation and provenance."""

    matrix: tuple[IV3, IV3, IV3]
    orientation: int
    provenance: str = ""

    def apply(self, p: CertifiedPoint3) -> CertifiedPoint3:
        m = self.matrix
        coords = []
        for row in m:
            coords.append(row[0] * p.x + row[1] * p.y + row[2] * p.z)
        prov = f"{self.provenance}*{p.provenance}" if p.provenance else self.provenance
        return CertifiedPoint3(coords[0], coords[1], coords[2], prov)

    def mid_matrix(self) -> np.ndarray:
        return np.array([[c.mid_float() for c in row] for row in self.matrix])

    def orthogonality_defect(self) -> float:
        """Largest |(M M^T - I)| entry bound (log2)."""
        worst = float("-inf")
        for i in range(3):
            for j in range(3):
                acc = None
                for k in range(3):
                    t = self.matrix[i][k] * self.matrix[j][k]
                    acc = t if acc is None else acc + t
                target = Fraction(1) if i == j else Fraction(0)
                lo = acc.lo_fraction() - target
                hi = acc.hi_fraction() - target
                m = max(abs(lo), abs(hi))
                worst = max(worst, math.log2(m) if m else float("-inf"))
        return worst


def _iv_dot(a: IV3, b: IV3) -> DyadicInterval:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _iv_sub(a: IV3, b: IV3) -> IV3:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _iv_scale(a: IV3, s: DyadicInterval) -> IV3:
    return (a[0] * s, a[1] * s, a[2] * s)


def _iv_cross(a: IV3, b: IV3) -> IV3:
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def _orthonormal_frame(u: IV3, v: IV3) -> tuple[IV3, IV3, IV3]:
    """Columns: unit u, unit component of v orthogonal to u, their cross."""
    nu = _iv_dot(u, u).sqrt().inverse()
    e1 = _iv_scale(u, nu)
    proj = _iv_dot(v, e1)
    w = _iv_sub(v, _iv_scale(e1, proj))
    nw = _iv_dot(w, w).sqrt().inverse()
    e2 = _iv_scale(w, nw)
    e3 = _iv_cross(e1, e2)
    return (e1, e2, e3)


def certify_unit_distance(p: CertifiedPoint3, q: CertifiedPoint3,
                          bits_used: int) -> Optional[bool]:
    """True: certified edge; False: certified non-edge; None: undecided."""
    d2 = p.dist2(q)
    one = Fraction(1)
    if not d2.contains(one):
        return False
    diff = d2 - di_one(d2.bits)
    if bits_used >= 256 and diff.abs_lt(Fraction(1, 1 << -EDGE_TOL_LOG2)):
        return True
    return None


def gluing_isometries(u1: CertifiedPoint3, v1: CertifiedPoint3,
                      u2: CertifiedPoint3, v2: CertifiedPoint3,
                      spec: SphereSpec, tag: str = "") -> list[SphereIsometry]:
    """The four sphere isometries sending the chord {u2,v2} onto {u1,v1}.

    Two map (u2,v2) -> (u1,v1) and two map (u2,v2) -> (v1,u1); each pair is
    one rotation and one reflection.
    """
    for a, b in ((u1, v1), (u2, v2)):
        ok = certify_unit_distance(a, b, spec.bits)
        if ok is not True:
            raise ValueError("gluing requires certified unit chords")
    out = []
    f2 = _orthonormal_frame(u2.coords(), v2.coords())
    for swap in (False, True):
        a1, b1 = (v1, u1) if swap else (u1, v1)
        f1 = _orthonormal_frame(a1.coords(), b1.coords())
        for reflect in (False, True):
            cols1 = (f1[0], f1[1], (-f1[2][0], -f1[2][1], -f1[2][2])) if reflect else f1
            rows = []
            for i in range(3):
                row = []
                for j in range(3):
                    acc = None
                    for k in range(3):
                        t = cols1[k][i] * f2[k][j]
                        acc = t if acc is None else acc + t
                    row.append(acc)
                rows.append(tuple(row))
            det = 1 if not reflect else -1
            out.append(SphereIsometry(tuple(rows), det,
                                      f"{tag}{'S' if swap else ''}{'R' if reflect else ''}"))
    return out


# -- deduplication ---------------------------------------------------------------


def dedup_points(points: Sequence[CertifiedPoint3],
                 bits: int) -> tuple[list[CertifiedPoint3], list[int]]:
    """Merge certified-equal points; error when neither merge nor separation
    certifies at the precision cap.  Returns (unique points, index map)."""
    merged: list[CertifiedPoint3] = []
    index_map: list[int] = []
    buckets: dict[tuple[int, int, int], list[int]] = {}
    scale = 1 << 20
    merge_bound = Fraction(1, 1 << -MERGE_TOL_LOG2)
    for p in points:
        mx, my, mz = p.mid()
        keys = []
        base = (math.floor(mx * scale), math.floor(my * scale), math.floor(mz * scale))
        hit = None
        for dx in (0, 1, -1):
            for dy in (0, 1, -1):
                for dz in (0, 1, -1):
                    cell = (base[0] + dx, base[1] + dy, base[2] + dz)
                    for idx in buckets.get(cell, ()):  # candidate duplicates
                        q = merged[idx]
                        diffs = (p.x - q.x, p.y - q.y, p.z - q.z)
                        if all(d.abs_lt(merge_bound) for d in diffs):
                            hit = idx
                            break
                        if any(not d.contains_zero() for d in diffs):
                            continue
                        raise ArithmeticError(
                            f"cannot merge or separate points {p} and {q} "
                            f"at {bits} bits")
                    if hit is not None:
                        break
                if hit is not None:
                    break
            if hit is not None:
                break
        if hit is None:
            merged.append(p)
            hit = len(merged) - 1
            buckets.setdefault(base, []).append(hit)
        index_map.append(hit)
    return merged, index_map


# -- unit distance graphs on the sphere --------------------------------------------


def build_udg_sphere(points: Sequence[CertifiedPoint3], spec: SphereSpec,
                     window: float = 1e-6, block: int = 512) -> UnitDistanceGraph:
    """udg(V) with certified edge decisions.

    Interval midpoints (certified far beyond the prefilter window) propose
    candidate pairs; each candidate is decided by interval arithmetic, with
    a hard error for pairs undecidable at the precision cap.
    """
    pts = list(points)
    n = len(pts)
    for p in pts:
        if p.width_log2() > -60:
            raise ValueError("point intervals too wide for reliable prefiltering")
    arr = np.array([p.mid() for p in pts])
    edges = []
    for i0 in range(0, n, block):
        blk = arr[i0:i0 + block]
        d2 = ((blk[:, None, :] - arr[None, :, :]) ** 2).sum(axis=2)
        ii, jj = np.nonzero(np.abs(d2 - 1.0) < window)
        for a, b in zip(ii.tolist(), jj.tolist()):
            i = i0 + a
            if i >= b:
                continue
            verdict = certify_unit_distance(pts[i], pts[b], spec.bits)
            if verdict is None:
                raise ArithmeticError(
                    f"unit-distance test undecidable for vertex pair ({i}, {b}) "
                    f"at {spec.bits} bits")
            if verdict:
                edges.append((i, b))
    return UnitDistanceGraph(spec, pts, edges)


def icosahedron_vertices(spec: SphereSpec, bits: Optional[int] = None,
                         ) -> list[CertifiedPoint3]:
    """The 12 vertices: raw at r1 (unit edges), scaled by 1/tau at r2."""
    b = bits or spec.bits
    verts = icosa.icosahedron_vertices_exact()
    if spec.tag == "r1":
        pts = verts
    elif spec.tag == "r2":
        pts = [icosa.scale_point(v, icosa.TAU_INV) for v in verts]
    else:
        raise ValueError("vertices available only for the r1/r2 spheres")
    return [CertifiedPoint3.from_exact(p, b, provenance=f"ico{i}")
            for i, p in enumerate(pts)]


def distance_product(G1: UnitDistanceGraph, G2: UnitDistanceGraph,
                     spec: SphereSpec) -> UnitDistanceGraph:
    """udg of the union of all edge-gluing images of V(G2).

    For every edge pair (e1 in G1, e2 in G2) the four gluing isometries are
    applied to all of V(G2); the resulting points are deduplicated with
    certified merges.  Not commutative in general.
    """
    pts: list[CertifiedPoint3] = []
    for i1, (a1, b1) in enumerate(G1.edges):
        u1, v1 = G1.vertices[a1], G1.vertices[b1]
        for i2, (a2, b2) in enumerate(G2.edges):
            u2, v2 = G2.vertices[a2], G2.vertices[b2]
            for iso in gluing_isometries(u1, v1, u2, v2, spec,
                                         tag=f"e{i1}:{i2}"):
                for p in G2.vertices:
                    pts.append(iso.apply(p))
    merged, _ = dedup_points(pts, spec.bits)
    return build_udg_sphere(merged, spec)


# -- minimal polynomial verification ------------------------------------------------


def verify_minpoly(coord: DyadicInterval, coeffs: Sequence[int],
                   bits: int = 256) -> bool:
    """Does the integer polynomial vanish at twice the coordinate?

    True iff the interval evaluation of p(2*coord) contains 0 and refines
    below 2^-64 at the requested precision.
    """
    if not any(coeffs):
        raise ValueError("zero polynomial")
    x = coord.at_bits(bits) + coord.at_bits(bits)  # 2 * coord
    acc = DyadicInterval.from_int(0, bits)
    power = di_one(bits)
    for c in coeffs:
        if c:
            acc = acc + power.scale(Fraction(c))
        power = power * x
    return acc.contains_zero() and acc.abs_lt(Fraction(1, 1 << 64))


# -- rotation copies -----------------------------------------------------------------


def rotation_about_axis(axis: CertifiedPoint3, cos_iv: DyadicInterval,
                        sin_iv: DyadicInterval, tag: str = "") -> SphereIsometry:
    """Rotation matrix I*cos + sin*[a]_x + (1-cos) a a^T for a unit axis."""
    ax = axis.coords()
    n2 = _iv_dot(ax, ax)
    inv_n = n2.sqrt().inverse()
    a = _iv_scale(ax, inv_n)
    one = di_one(cos_iv.bits)
    omc = one - cos_iv
    rows = []
    eye = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    skew = ((None, -1, +1), (+1, None, -1), (-1, +1, None))
    skew_idx = ((None, 2, 1), (2, None, 0), (1, 0, None))
    for i in range(3):
        row = []
        for j in range(3):
            term = cos_iv.scale(Fraction(eye[i][j]))
            if i != j:
                s = skew[i][j]
                term = term + sin_iv * a[skew_idx[i][j]].scale(Fraction(s))
            term = term + omc * a[i] * a[j]
            row.append(term)
        rows.append(tuple(row))
    return SphereIsometry(tuple(rows), 1, tag)


def rotation_copies(spec: SphereSpec,
                    rotations: Sequence[tuple[DyadicInterval, DyadicInterval]],
                    axes: Sequence[tuple[int, int]],
                    ) -> list[CertifiedPoint3]:
    """Identity plus +-rotations about opposite-vertex axes applied to the
    twelve base vertices, deduplicated.

    rotations holds (cos, sin) enclosures; axes holds vertex index pairs.
    """
    base = icosahedron_vertices(spec)
    pts = list(base)
    for (ia, ib) in axes:
        axis = base[ia]
        for (c, s) in rotations:
            for sgn in (1, -1):
                rot = rotation_about_axis(axis, c, s.scale(Fraction(sgn)),
                                          tag=f"ax{ia}")
                for p in base:
                    pts.append(rot.apply(p))
    merged, _ = dedup_points(pts, spec.bits)
    return merged


def opposite_vertex_axes(spec: SphereSpec) -> list[tuple[int, int]]:
    verts = icosahedron_vertices(spec)
    out = []
    seen = set()
    for i, p in enumerate(verts):
        if i in seen:
            continue
        for j in range(i + 1, 12):
            q = verts[j]
            s = (p.x + q.x, p.y + q.y, p.z + q.z)
            if all(c.contains_zero() for c in s):
                out.append((i, j))
                seen.add(j)
                break
    if len(out) != 6:
        raise AssertionError("expected 6 opposite-vertex axes")
    return out


# -- rigid embedding ------------------------------------------------------------------


class EmbeddingError(RuntimeError):
    pass


def _embed_system(graph: AbstractGraph, pinned: dict[int, CertifiedPoint3],
                  spec: SphereSpec):
    """Equations for the free vertices: unit edges plus sphere membership."""
    free = [v for v in range(graph.n) if v not in pinned]
    if not free:
        raise ValueError("no free vertices to solve for")
    fidx = {v: i for i, v in enumerate(free)}
    eqs: list[tuple[str, tuple]] = [("sphere", (v,)) for v in free]
    for (u, v) in graph.edges:
        if u in fidx or v in fidx:
            eqs.append(("edge", (u, v)))
    nunk = 3 * len(free)
    if len(eqs) != nunk:
        raise EmbeddingError(
            f"system is not square: {len(eqs)} equations, {nunk} unknowns "
            "(pin vertices until the counts match)")
    return free, fidx, eqs


def _embed_float_residual(x: np.ndarray, free, fidx, eqs, pinned_mid, r2: float):
    def pos(v):
        if v in fidx:
            i = fidx[v]
            return x[3 * i:3 * i + 3]
        return pinned_mid[v]
    F = np.empty(len(eqs))
    for row, (kind, data) in enumerate(eqs):
        if kind == "sphere":
            p = pos(data[0])
            F[row] = p @ p - r2
        else:
            u, v = data
            d = pos(u) - pos(v)
            F[row] = d @ d - 1.0
    return F


def _embed_float_jacobian(x: np.ndarray, free, fidx, eqs, pinned_mid):
    n = len(eqs)
    J = np.zeros((n, n))
    def pos(v):
        if v in fidx:
            i = fidx[v]
            return x[3 * i:3 * i + 3]
        return pinned_mid[v]
    for row, (kind, data) in enumerate(eqs):
        if kind == "sphere":
            v = data[0]
            i = fidx[v]
            J[row, 3 * i:3 * i + 3] = 2 * pos(v)
        else:
            u, v = data
            d = pos(u) - pos(v)
            if u in fidx:
                i = fidx[u]
                J[row, 3 * i:3 * i + 3] += 2 * d
            if v in fidx:
                i = fidx[v]
                J[row, 3 * i:3 * i + 3] -= 2 * d
    return J


def embed_rigid(graph: AbstractGraph, pinned: dict[int, CertifiedPoint3],
                seed: Sequence[Sequence[float]], spec: SphereSpec,
                target_log2: int = -120, max_refine: int = 60,
                ) -> list[CertifiedPoint3]:
    """Certified sphere embedding of a minimally rigid graph.

    Newton iteration at escalating precision from a floating seed for the
    free vertices, followed by a Krawczyk containment step that certifies a
    unique solution inside the returned coordinate enclosures.  Pinned
    vertices are used exactly as given.
    """
    free, fidx, eqs = _embed_system(graph, pinned, spec)
    bits = spec.bits
    r2_iv = spec.radius_squared_interval(bits)
    r2f = float(r2_iv)
    pinned_mid = {v: np.array(p.mid()) for v, p in pinned.items()}

    # float Newton to ~1e-12
    x = np.array([c for p in seed for c in p], dtype=float)
    if x.shape != (3 * len(free),):
        raise ValueError("seed size does not match free vertex count")
    for it in range(200):
        F = _embed_float_residual(x, free, fidx, eqs, pinned_mid, r2f)
        if np.max(np.abs(F)) < 1e-12:
            break
        J = _embed_float_jacobian(x, free, fidx, eqs, pinned_mid)
        try:
            dx = np.linalg.solve(J, F)
        except np.linalg.LinAlgError as exc:
            raise EmbeddingError(f"singular Jacobian at the seed: {exc}") from exc
        if not np.all(np.isfinite(dx)):
            raise EmbeddingError("Newton step diverged")
        x = x - dx
        if np.max(np.abs(dx)) > 10:
            raise EmbeddingError("Newton step diverged")
    else:
        raise EmbeddingError(
            f"float Newton failed to converge (residual {np.max(np.abs(F)):.2e})")

    # fixed-point refinement with the float inverse Jacobian
    P = bits + 64
    scale = 1 << P
    J = _embed_float_jacobian(x, free, fidx, eqs, pinned_mid)
    Y = np.linalg.inv(J)
    Yint = [[int(round(Y[i, j] * (1 << 60))) for j in range(len(eqs))]
            for i in range(len(eqs))]
    xi = [int(round(v * scale)) for v in x]
    pin_int: dict[int, tuple[int, int, int]] = {}
    for v, p in pinned.items():
        if p.exact is not None:
            pin_int[v] = tuple(
                int((c.rational_bounds(P + 16)[0] + c.rational_bounds(P + 16)[1])
                    / 2 * scale) for c in p.exact)
        else:
            fr = (p.x.lo_fraction() + p.x.hi_fraction()) / 2, \
                 (p.y.lo_fraction() + p.y.hi_fraction()) / 2, \
                 (p.z.lo_fraction() + p.z.hi_fraction()) / 2
            pin_int[v] = tuple(int(f * scale) for f in fr)
    r2_mid = (r2_iv.lo_fraction() + r2_iv.hi_fraction()) / 2
    r2_int = int(r2_mid * scale)
    one_int = scale

    def pos_int(v):
        if v in fidx:
            i = fidx[v]
            return xi[3 * i:3 * i + 3]
        return pin_int[v]

    def residual_int():
        F = []
        for kind, data in eqs:
            if kind == "sphere":
                p = pos_int(data[0])
                F.append((p[0] * p[0] + p[1] * p[1] + p[2] * p[2] >> P) - r2_int)
            else:
                u, v = data
                pu, pv = pos_int(u), pos_int(v)
                d = (pu[0] - pv[0], pu[1] - pv[1], pu[2] - pv[2])
                F.append((d[0] * d[0] + d[1] * d[1] + d[2] * d[2] >> P) - one_int)
        return F

    for it in range(max_refine):
        F = residual_int()
        worst = max(abs(f) for f in F)
        if worst < (1 << max(0, P + target_log2 - 40)):
            break
        for i in range(len(xi)):
            acc = 0
            Yrow = Yint[i]
            for j, fj in enumerate(F):
                acc += Yrow[j] * fj
            xi[i] -= acc >> 60

    # Krawczyk certification on a box around the refined point
    g = -target_log2
    certified = False
    for attempt in range(6):
        box = []
        for i in range(len(xi)):
            c = Fraction(xi[i], scale)
            rad = Fraction(1, 1 << g)
            box.append(DyadicInterval.from_bounds(c - rad, c + rad, bits))
        if _krawczyk_contains(box, xi, scale, Y, free, fidx, eqs, pinned,
                              r2_iv, bits):
            certified = True
            break
        g -= 12
        if g < 40:
            break
    if not certified:
        raise EmbeddingError("Krawczyk certification failed")
    out = []
    for i, v in enumerate(free):
        out.append(CertifiedPoint3(box[3 * i], box[3 * i + 1], box[3 * i + 2],
                                   provenance=f"embed:{v}"))
    return out


# -- the two sphere pipelines ---------------------------------------------------------

# expected minimal polynomials (ascending coefficients, for doubled
# coordinates) and decimal anchors of the non-icosahedral vertex classes
G372_CLASS_DATA = [
    ((0.71584, 0.34924, 0.51972),
     ([-1, -1, 2, -2, 1], [-1, 2, -2, 1, 1], [-19, 0, 20, 0, 2, 0, -5, 0, 1])),
    ((-0.07961, -0.08345, 0.94404),
     ([1, 8, 9, -7, 28, 6, -4, -1, 1], [-1, -5, 5, -4, 9, -5, 1, -2, 1],
      [-1, 7, -13, -24, 4, 10, 0, -3, 1])),
    ((-0.17646, 0.79929, 0.48426),
     ([1, 8, 9, -7, 28, 6, -4, -1, 1], [-1, -5, 5, -4, 9, -5, 1, -2, 1],
      [-1, -7, -13, 24, 4, -10, 0, 3, 1])),
]

G972_CLASS_DATA = [
    ((0.46246, -0.32804, -0.15496),
     ([-49, -147, -71, 67, 129, 97, 42, 10, 1],
      [-19, 57, 206, 117, -11, -23, 1, 2, 1],
      [25, 150, 315, 370, 284, 145, 49, 10, 1])),
    ((-0.22176, 0.09483, 0.53602),
     ([-49, -147, -71, 67, 129, 97, 42, 10, 1],
      [-19, 57, 206, 117, -11, -23, 1, 2, 1],
      [25, -150, 315, -370, 284, -145, 49, -10, 1])),
    ((-0.57219, -0.04462, -0.12687),
     ([1, 1, -16, -21, 34, 156, 234, 159, 41],
      [-1, -15, -55, -121, 269, 690, 616, 257, 41],
      [-41, -211, -231, -148, -13, 75, 223, 174, 41])),
    ((-0.13592, -0.22502, -0.52572),
     ([1, 1, -16, -21, 34, 156, 234, 159, 41],
      [-1, 15, -55, 121, 269, -690, 616, -257, 41],
      [-41, 211, -231, 148, -13, -75, 223, -174, 41])),
    ((0.07219, 0.35363, 0.46392),
     ([-1, 5, 10, 8, 69, 205, 269, 169, 41],
      [1, -13, 61, -138, 164, -118, 96, -93, 41],
      [269, -232, -669, 471, 642, -335, -258, 72, 41])),
    ((-0.36408, 0.08400, -0.45374),
     ([-1, 5, 10, 8, 69, 205, 269, 169, 41],
      [1, -13, 61, -138, 164, -118, 96, -93, 41],
      [269, 232, -669, -471, 642, 335, -258, -72, 41])),
    ((-0.58345, 0.05157, 0.0492),
     ([-1, 4, -2, -12, -1, 15, 15, 6, 1],
      [-1, 10, -5, 18, 19, -15, -1, -1, 1],
      [1, -14, 36, 29, 13, 17, 19, 7, 1])),
    ((-0.4376, 0.03856, 0.39052),
     ([-1, -1, -2, 4, 14, 15, 13, 6, 1],
      [1, -15, 28, -21, -1, 11, 1, -4, 1],
      [-41, -37, 108, 45, -42, -11, 4, 2, 1])),
]

# cap pinning that reproduces the published coordinates: plane cap vertices
# (center, h2, h3, h4, h5, h0) onto these base vertex indices
_L91_CAP_PIN = {0: 1, 2: 0, 3: 2, 4: 4, 5: 8, 1: 3}
_L91_SEED = [[-0.17645723, 0.79928929, 0.48426024],
             [-0.07960671, -0.08344758, 0.94403801],
             [0.71584171, 0.34923922, 0.51972215]]


def l91_sphere_embedding(spec: Optional[SphereSpec] = None) -> UnitDistanceGraph:
    """The nine-vertex rigid graph embedded on the unit-icosahedron sphere.

    Six vertices pin to the pentagonal cap of the base icosahedron; the
    remaining three land on the certified coordinates whose doubled values
    satisfy the recorded minimal polynomials.  The udg of the nine points
    has one edge beyond the abstract graph (the cap pentagon closes).
    """
    from .catalog import l91_points
    from .graphs import build_udg_plane

    spec = spec or SphereSpec.r1()
    l91 = build_udg_plane(l91_points()).abstract()
    base = icosahedron_vertices(spec)
    pinned = {pv: base[iv] for pv, iv in _L91_CAP_PIN.items()}
    freepts = embed_rigid(l91, pinned, _L91_SEED, spec)
    verts: list[CertifiedPoint3] = [None] * 9  # type: ignore
    for pv, iv in _L91_CAP_PIN.items():
        verts[pv] = base[iv]
    for i, v in enumerate(sorted(set(range(9)) - set(_L91_CAP_PIN))):
        verts[v] = freepts[i]
    return build_udg_sphere(verts, spec)


def class_labels(g: UnitDistanceGraph, spec: SphereSpec) -> list[int]:
    """Orbit-class labels from distance fingerprints to the base vertices.

    Vertices with identical sorted squared-distance multisets to the twelve
    base vertices receive the same label; labels are dense from 0 ordered by
    (class size, fingerprint).
    """
    base = icosahedron_vertices(spec)
    basemid = np.array([b.mid() for b in base])
    fps = []
    for p in g.vertices:
        m = np.array(p.mid())
        d2 = ((basemid - m) ** 2).sum(axis=1)
        fps.append(tuple(sorted(round(v, 6) for v in d2)))
    groups: dict[tuple, list[int]] = {}
    for i, fp in enumerate(fps):
        groups.setdefault(fp, []).append(i)
    ordered = sorted(groups.items(), key=lambda kv: (len(kv[1]), kv[0]))
    labels = [0] * g.n
    for lab, (fp, members) in enumerate(ordered):
        for i in members:
            labels[i] = lab
    return labels


def validate_class_minpolys(g: UnitDistanceGraph, spec: SphereSpec,
                            class_data, bits: int = 256) -> dict:
    """Match each non-base vertex class against the recorded polynomials.

    For every class, some orbit image of a representative must satisfy all
    three coordinate polynomials (at doubled coordinates, certified) and sit
    near the recorded decimal anchors.
    """
    labels = g.labels or class_labels(g, spec)
    group = icosa.icosahedral_group()
    scale = icosa.TAU_INV if spec.tag == "r2" else icosa.ONE
    by_class: dict[int, int] = {}
    for i, lab in enumerate(labels):
        by_class.setdefault(lab, i)
    basemid = np.array([b.mid() for b in icosahedron_vertices(spec)])
    results = {}
    matched_rows = set()
    for lab, rep_idx in sorted(by_class.items()):
        rep = g.vertices[rep_idx]
        mid = np.array(rep.mid())
        if np.min(((basemid - mid) ** 2).sum(axis=1)) < 1e-9:
            continue  # the base-vertex class has exact golden coordinates
        found = None
        for gi, mat in enumerate(group):
            mm = np.array([[float(e) for e in row] for row in mat])
            img = mm @ mid
            for row_i, (anchor, polys) in enumerate(class_data):
                if row_i in matched_rows:
                    continue
                if np.max(np.abs(img - np.array(anchor))) < 2e-5:
                    # certified check on the rotated interval point
                    exact_rows = [tuple(to_interval(e, bits) for e in row)
                                  for row in mat]
                    coords = []
                    for row in exact_rows:
                        coords.append(row[0] * rep.x + row[1] * rep.y
                                      + row[2] * rep.z)
                    ok = all(verify_minpoly(c, poly, bits)
                             for c, poly in zip(coords, polys))
                    if ok:
                        found = row_i
                        matched_rows.add(row_i)
                        break
            if found is not None:
                break
        if found is None:
            raise ArithmeticError(f"class {lab} matches no recorded polynomial row")
        results[lab] = found
    if len(matched_rows) != len(class_data):
        raise ArithmeticError(
            f"only {len(matched_rows)} of {len(class_data)} rows matched")
    return results


def build_g372(bits: int = 288, validate: bool = True) -> tuple[UnitDistanceGraph, dict]:
    """Distance product of the icosahedron graph with the nine-vertex
    embedding, pruned at minimum degree 8; 372 vertices and 1710 edges."""
    spec = SphereSpec.r1(bits)
    h121 = build_udg_sphere(icosahedron_vertices(spec), spec)
    h91 = l91_sphere_embedding(spec)
    prod = distance_product(h121, h91, spec)
    report = {"product_vertices": prod.n, "product_edges": prod.num_edges}
    g = prune_min_degree(prod, 8)
    g.labels = class_labels(g, spec)
    report["vertices"] = g.n
    report["edges"] = g.num_edges
    report["degree_histogram"] = g.degree_stats().histogram
    report["h91_edges"] = h91.num_edges
    if validate:
        report["class_rows"] = validate_class_minpolys(g, spec, G372_CLASS_DATA)
    return g, report


def derive_axis_rotations(g: UnitDistanceGraph, spec: SphereSpec,
                          ) -> list[tuple[DyadicInterval, DyadicInterval]]:
    """Recover the (cos, sin) of the rotations generating the non-base
    classes: each class representative is an axis rotation of a base vertex.

    For a representative p and axis a, the rotation angle about a that maps
    some base vertex w to p satisfies cos/sin obtained from the projections
    orthogonal to a; the derivation is fully certified (no trigonometry).
    """
    labels = g.labels or class_labels(g, spec)
    base = icosahedron_vertices(spec)
    axes = opposite_vertex_axes(spec)
    basemid = np.array([b.mid() for b in base])
    out = []
    seen_cos: list[float] = []
    by_class: dict[int, int] = {}
    for i, lab in enumerate(labels):
        by_class.setdefault(lab, i)
    for lab, rep_idx in sorted(by_class.items()):
        rep = g.vertices[rep_idx]
        p = np.array(rep.mid())
        if np.min(((basemid - p) ** 2).sum(axis=1)) < 1e-9:
            continue
        found = None
        for (ia, _) in axes:
            a = basemid[ia]
            a = a / np.linalg.norm(a)
            for wi in range(12):
                w = basemid[wi]
                if abs((w - p) @ a) < 1e-9 and abs(w @ a - p @ a) < 1e-9:
                    u = w - (w @ a) * a
                    v = p - (p @ a) * a
                    nu = u @ u
                    if nu < 1e-6:
                        continue
                    c = (u @ v) / nu
                    s = (np.cross(a, u) @ v) / nu
                    if abs(c * c + s * s - 1) < 1e-9 and abs(s) > 1e-9:
                        found = (ia, wi)
                        break
            if found:
                break
        if not found:
            raise ArithmeticError(f"class {lab}: no axis rotation found")
        ia, wi = found
        axis = base[ia]
        w = base[wi]
        n2 = _iv_dot(axis.coords(), axis.coords())
        inv_n2 = n2.inverse()
        adotw = _iv_dot(axis.coords(), w.coords())
        adotp = _iv_dot(axis.coords(), rep.coords())
        u = _iv_sub(w.coords(), _iv_scale(axis.coords(), adotw * inv_n2))
        v = _iv_sub(rep.coords(), _iv_scale(axis.coords(), adotp * inv_n2))
        uu = _iv_dot(u, u)
        inv_uu = uu.inverse()
        c_iv = _iv_dot(u, v) * inv_uu
        axn = _iv_dot(axis.coords(), axis.coords()).sqrt().inverse()
        ahat = _iv_scale(axis.coords(), axn)
        s_iv = _iv_dot(_iv_cross(ahat, u), v) * inv_uu
        c_iv, s_iv = _reduce_mod_fifth(c_iv, s_iv)
        cf = abs(c_iv.mid_float())
        if all(abs(cf - x) > 1e-9 for x in seen_cos):
            seen_cos.append(cf)
            if s_iv.mid_float() < 0:
                s_iv = -s_iv
            out.append((c_iv, s_iv))
    out.sort(key=lambda cs: abs(math.atan2(cs[1].mid_float(), cs[0].mid_float())))
    return out


def _reduce_mod_fifth(c: DyadicInterval, s: DyadicInterval,
                      ) -> tuple[DyadicInterval, DyadicInterval]:
    """Reduce a rotation angle modulo 2*pi/5 into (-pi/5, pi/5].

    A vertex-axis rotation by 2*pi/5 stabilizes the vertex set, so angles
    are only meaningful in this window; cos(2*pi/5) = (sqrt5 - 1)/4 exactly
    and sin(2*pi/5) comes from a certified square root.
    """
    bits = c.bits
    c5 = to_interval(icosa._fe(Fraction(-1, 4), Fraction(1, 4)), bits)
    s5 = to_interval(icosa._fe(Fraction(10, 16), Fraction(2, 16)), bits).sqrt()
    for _ in range(6):
        th = math.atan2(s.mid_float(), c.mid_float())
        if -math.pi / 5 < th <= math.pi / 5 + 1e-15:
            break
        if th > 0:  # subtract 2*pi/5
            c, s = c * c5 + s * s5, s * c5 - c * s5
        else:       # add 2*pi/5
            c, s = c * c5 - s * s5, s * c5 + c * s5
    return c, s


def _krawczyk_contains(box: list[DyadicInterval], xi: list[int], scale: int,
                       Y: np.ndarray, free, fidx, eqs, pinned,
                       r2_iv: DyadicInterval, bits: int) -> bool:
    """K(X) = x - Y F(x) + (I - Y J(X))(X - x) inside X proves a unique zero."""
    n = len(eqs)
    x_iv = [DyadicInterval.from_fraction(Fraction(xi[i], scale), bits)
            for i in range(n)]
    pin_iv = {v: p.coords() for v, p in pinned.items()}

    def pos_iv(v, arr):
        if v in fidx:
            i = fidx[v]
            return (arr[3 * i], arr[3 * i + 1], arr[3 * i + 2])
        return pin_iv[v]

    # F(x) at the midpoint (intervals around the dyadic point)
    Fx = []
    for kind, data in eqs:
        if kind == "sphere":
            p = pos_iv(data[0], x_iv)
            Fx.append(_iv_dot(p, p) - r2_iv)
        else:
            u, v = data
            d = _iv_sub(pos_iv(u, x_iv), pos_iv(v, x_iv))
            Fx.append(_iv_dot(d, d) - di_one(bits))
    # interval Jacobian over the box
    JX = [[None] * n for _ in range(n)]
    zero = DyadicInterval.from_int(0, bits)
    for row, (kind, data) in enumerate(eqs):
        cols: dict[int, DyadicInterval] = {}
        if kind == "sphere":
            v = data[0]
            i = fidx[v]
            p = pos_iv(v, box)
            for a in range(3):
                cols[3 * i + a] = p[a] + p[a]
        else:
            u, v = data
            d = _iv_sub(pos_iv(u, box), pos_iv(v, box))
            if u in fidx:
                i = fidx[u]
                for a in range(3):
                    cols[3 * i + a] = d[a] + d[a]
            if v in fidx:
                i = fidx[v]
                for a in range(3):
                    prev = cols.get(3 * i + a)
                    t = -(d[a] + d[a])
                    cols[3 * i + a] = t if prev is None else prev + t
        for c in range(n):
            JX[row][c] = cols.get(c, zero)
    # Y as exact dyadic intervals
    Yiv = [[DyadicInterval.from_fraction(Fraction(Y[i, j]), bits)
            for j in range(n)] for i in range(n)]
    # K = x - Y Fx + (I - Y JX)(box - x)
    for i in range(n):
        acc = x_iv[i]
        for j in range(n):
            acc = acc - Yiv[i][j] * Fx[j]
        for j in range(n):
            # entry (I - Y JX)[i][j]
            e = DyadicInterval.from_int(1 if i == j else 0, bits)
            for k in range(n):
                e = e - Yiv[i][k] * JX[k][j]
            acc = acc + e * (box[j] - x_iv[j])
        if not box[i].contains_interval(acc):
            return False
    return True
