"""Group-generated plane constructions and the rotation-candidate search.

Point sets grow from a finite rotation group: M1 holds the origin plus unit
words phi0^a0 * prod(phi_i^ai), later stages are clipped Minkowski sums, and
a 5-chromatic candidate is the union of a stage set with a rotated copy,
W = M_s u psi*M_s.  Rotations psi come from solving |z - psi'*w| = 1 over
chosen vertex pairs; each solution that creates at least one edge between
the two copies is a candidate, ranked by how many such edges it creates.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .field import (AdjoinedElement, AlgebraicComplex, FieldElement, QuadBasis,
                    try_absorb_radicand)
from .graphs import UnitDistanceGraph
from .interval import DyadicInterval, to_interval
from .packed import PackedPoints, confirm_unit_pairs, unit_pairs_between, unit_pairs_within


@dataclass
class GroupPresentation:
    """A finite-order rotation phi0 with phi0^k = 1 plus unit generators."""

    name: str
    basis: QuadBasis
    phi0: AlgebraicComplex
    k: int
    generators: list[AlgebraicComplex]

    def validate(self) -> None:
        one = AlgebraicComplex.one(self.basis)
        p = self.phi0
        for j in range(1, self.k):
            if p == one:
                raise ValueError(f"phi0 has order {j} < {self.k}")
            p = p * self.phi0
        if p != one:
            raise ValueError(f"phi0^{self.k} != 1")
        if self.phi0.norm2() != FieldElement.one(self.basis):
            raise ValueError("phi0 is not unit-norm")
        for g in self.generators:
            if g.norm2() != FieldElement.one(self.basis):
                raise ValueError("generator is not unit-norm")


def series_presets(series: int) -> GroupPresentation:
    """The two built-in presentations (1: hexagonal, 2: 24-fold)."""
    if series == 1:
        basis = QuadBasis([3, 11])
        phi0 = AlgebraicComplex.make(basis, {(): Fraction(1, 2)},
                                     {(3,): Fraction(1, 2)})
        phi1 = AlgebraicComplex.make(basis, {(3, 11): Fraction(1, 6)},
                                     {(3,): Fraction(1, 6)})
        pres = GroupPresentation("series1", basis, phi0, 6, [phi1])
    elif series == 2:
        basis = QuadBasis([2, 3])
        phi0 = AlgebraicComplex.make(
            basis,
            {(2, 3): Fraction(1, 4), (2,): Fraction(1, 4)},
            {(2, 3): Fraction(1, 4), (2,): Fraction(-1, 4)})
        phi1 = AlgebraicComplex.make(basis, {(2, 3): Fraction(1, 3)},
                                     {(3,): Fraction(1, 3)})
        pres = GroupPresentation("series2", basis, phi0, 24, [phi1])
    else:
        raise ValueError("series must be 1 or 2")
    pres.validate()
    return pres


class PointSetM:
    """A deduplicated, origin-containing, phi0-symmetric point set."""

    def __init__(self, presentation: GroupPresentation,
                 points: list[AlgebraicComplex], stage: int,
                 clip_history: list[Optional[Fraction]]):
        self.presentation = presentation
        self.points = points  # points[0] is the origin
        self.stage = stage
        self.clip_history = clip_history
        self._packed: Optional[PackedPoints] = None
        self._packed_nz: Optional[PackedPoints] = None

    def __len__(self) -> int:
        return len(self.points)

    def packed(self) -> PackedPoints:
        if self._packed is None:
            self._packed = PackedPoints.from_points(self.points)
        return self._packed

    def packed_nonzero(self) -> PackedPoints:
        if self._packed_nz is None:
            self._packed_nz = PackedPoints.from_points(self.points[1:])
        return self._packed_nz

    def key_set(self) -> set:
        return {p.key() for p in self.points}


def build_m1(pres: GroupPresentation, t: int) -> PointSetM:
    """{0} union {phi0^a0 * prod phi_i^ai : 0<=a0<k, -t<=ai<=t}."""
    if t < 0:
        raise ValueError("t must be >= 0")
    basis = pres.basis
    zero = AlgebraicComplex.zero(basis)
    points: dict = {zero.key(): zero}
    # generator power grid (p generators, each exponent in [-t, t])
    grids: list[list[AlgebraicComplex]] = []
    for g in pres.generators:
        pows = {0: AlgebraicComplex.one(basis)}
        for j in range(1, t + 1):
            pows[j] = pows[j - 1] * g
            pows[-j] = pows[j].conj()  # unit norm: inverse is the conjugate
        grids.append([pows[e] for e in range(-t, t + 1)])
    combos = [AlgebraicComplex.one(basis)]
    for grid in grids:
        combos = [c * g for c in combos for g in grid]
    for base in combos:
        z = base
        for _ in range(pres.k):
            points.setdefault(z.key(), z)
            z = z * pres.phi0
    ordered = [zero] + sorted((p for k2, p in points.items() if p is not zero and not p.is_zero()),
                              key=lambda p: (float(p.re), float(p.im)))
    return PointSetM(pres, ordered, 1, [None])


def minkowski_clip_step(M: PointSetM, M1: PointSetM,
                        r: Optional[Union[Fraction, int]]) -> PointSetM:
    """clip(M + M1; r): Minkowski sum, dedup, exact modulus clip (None = inf)."""
    if M.presentation is not M1.presentation:
        raise ValueError("presentation mismatch")
    basis = M.presentation.basis
    out: dict = {}
    for a in M.points:
        for b in M1.points:
            s = a + b
            k2 = s.key()
            if k2 not in out:
                out[k2] = s
    if r is not None:
        r = Fraction(r)
        r2 = FieldElement.from_rational(basis, r * r)
        kept = {}
        for k2, z in out.items():
            if (r2 - z.norm2()).sign() >= 0:
                kept[k2] = z
        out = kept
    zero = AlgebraicComplex.zero(basis)
    pts = [zero] + sorted((p for p in out.values() if not p.is_zero()),
                          key=lambda p: (float(p.re), float(p.im)))
    return PointSetM(M.presentation, pts, M.stage + 1, M.clip_history + [r])


def build_stages(pres: GroupPresentation, t: int, s: int,
                 clips: Sequence[Optional[Union[Fraction, int]]]) -> list[PointSetM]:
    """[M1, M2, ..., Ms] with the given clip radii for stages 2..s."""
    if len(clips) != s - 1:
        raise ValueError(f"need {s - 1} clip radii for s={s}")
    m1 = build_m1(pres, t)
    out = [m1]
    cur = m1
    for i in range(s - 1):
        cur = minkowski_clip_step(cur, m1, clips[i])
        out.append(cur)
    return out


# -- rotations -----------------------------------------------------------------


class ExtendedComplex:
    """Complex number with coordinates in a one-step real quadratic extension."""

    __slots__ = ("re", "im")

    def __init__(self, re: AdjoinedElement, im: AdjoinedElement):
        self.re = re
        self.im = im

    @staticmethod
    def from_algebraic(z: AlgebraicComplex) -> "ExtendedComplex":
        return ExtendedComplex(AdjoinedElement.from_field(z.re),
                               AdjoinedElement.from_field(z.im))

    @property
    def in_field(self) -> bool:
        return self.re.is_in_field() and self.im.is_in_field()

    def as_algebraic(self) -> AlgebraicComplex:
        return AlgebraicComplex(self.re.as_field(), self.im.as_field())

    def conj(self) -> "ExtendedComplex":
        return ExtendedComplex(self.re, -self.im)

    def __mul__(self, other: Union["ExtendedComplex", AlgebraicComplex]) -> "ExtendedComplex":
        if isinstance(other, AlgebraicComplex):
            other = ExtendedComplex.from_algebraic(other)
        re = self.re * other.re - self.im * other.im
        im = self.re * other.im + self.im * other.re
        return ExtendedComplex(re, im)

    def __sub__(self, other: "ExtendedComplex") -> "ExtendedComplex":
        return ExtendedComplex(self.re - other.re, self.im - other.im)

    def __add__(self, other: "ExtendedComplex") -> "ExtendedComplex":
        return ExtendedComplex(self.re + other.re, self.im + other.im)

    def norm2(self) -> AdjoinedElement:
        return self.re * self.re + self.im * self.im

    def equals(self, other: "ExtendedComplex") -> bool:
        return (self.re - other.re).is_zero() and (self.im - other.im).is_zero()

    def __complex__(self) -> complex:
        return complex(self.float_re(), self.float_im())

    def float_re(self, bits: int = 80) -> float:
        lo, hi = self.re.rational_bounds(bits)
        return float((lo + hi) / 2)

    def float_im(self, bits: int = 80) -> float:
        lo, hi = self.im.rational_bounds(bits)
        return float((lo + hi) / 2)

    def im_interval(self, bits: int = 64) -> DyadicInterval:
        return to_interval(self.im, bits)

    def to_json(self) -> dict:
        out = {"re": self.re.a.to_json(), "im": self.im.a.to_json()}
        if not self.re.b.is_zero() or not self.im.b.is_zero():
            rad = self.re.radicand if not self.re.b.is_zero() else self.im.radicand
            out["ext"] = {"radicand": rad.to_json(),
                          "re2": self.re.b.to_json(),
                          "im2": self.im.b.to_json()}
        return out

    @staticmethod
    def from_json(obj: dict) -> "ExtendedComplex":
        a_re = FieldElement.from_json(obj["re"])
        a_im = FieldElement.from_json(obj["im"])
        if "ext" in obj:
            rad = FieldElement.from_json(obj["ext"]["radicand"])
            b_re = FieldElement.from_json(obj["ext"]["re2"])
            b_im = FieldElement.from_json(obj["ext"]["im2"])
            return ExtendedComplex(AdjoinedElement(a_re, b_re, rad),
                                   AdjoinedElement(a_im, b_im, rad))
        return ExtendedComplex(AdjoinedElement.from_field(a_re),
                               AdjoinedElement.from_field(a_im))


def solve_unit_rotations(z: AlgebraicComplex, w: AlgebraicComplex) -> list[ExtendedComplex]:
    """Unit-norm psi' with |z - psi'*w| = 1, exactly (0, 1 or 2 solutions).

    Writing u = z*conj(w) = a + b*i and c = (|z|^2 + |w|^2 - 1)/2, the
    constraint is Re(u * conj(psi')) = c on the unit circle.  The square root
    of the discriminant is absorbed into an extended radicand basis when
    possible, otherwise adjoined.
    """
    if z.is_zero() or w.is_zero():
        raise ValueError("degenerate rotation equation: z and w must be nonzero")
    basis = z.basis
    u = z * w.conj()
    a, b = u.re, u.im
    r2 = u.norm2()
    c = (z.norm2() + w.norm2() - FieldElement.one(basis)) * Fraction(1, 2)
    disc = r2 - c * c
    s_disc = disc.sign()
    if s_disc < 0:
        return []
    absorbed = try_absorb_radicand(disc)
    out: list[ExtendedComplex] = []
    if absorbed is not None:
        ext, root = absorbed
        a_e, b_e, c_e, r2_e = (x.embed(ext) for x in (a, b, c, r2))
        inv = r2_e.inverse()
        for sg in (1, -1):
            x = (a_e * c_e - b_e * root * sg) * inv
            y = (b_e * c_e + a_e * root * sg) * inv
            out.append(ExtendedComplex.from_algebraic(AlgebraicComplex(x, y)))
            if s_disc == 0:
                break
    else:
        inv = r2.inverse()
        for sg in (1, -1):
            xa = a * c * inv
            xb = -b * inv * Fraction(sg)
            ya = b * c * inv
            yb = a * inv * Fraction(sg)
            out.append(ExtendedComplex(AdjoinedElement(xa, xb, disc),
                                       AdjoinedElement(ya, yb, disc)))
            if s_disc == 0:
                break
    for psi in out:
        n2 = psi.norm2()
        if not (n2.is_in_field() and n2.as_field() == FieldElement.one(n2.a.basis)):
            raise AssertionError("rotation solution is not unit-norm")
    return out


def canonical_rotation(psi: ExtendedComplex, pres: GroupPresentation,
                       ) -> tuple[ExtendedComplex, int, bool]:
    """Sector representative of {psi * phi0^p} u {conj(psi) * phi0^p}.

    Scans all 2k exact representatives and returns the one with argument in
    [0, pi/k] (smallest argument on ties), plus the shift and conjugation
    that produced it.
    """
    k = pres.k
    sector = math.pi / k
    best = None
    phi0 = ExtendedComplex.from_algebraic(
        pres.phi0.embed(psi.re.a.basis) if pres.phi0.basis is not psi.re.a.basis
        else pres.phi0)
    for conj_flag in (False, True):
        cand = psi.conj() if conj_flag else psi
        for p in range(k):
            th = math.atan2(cand.float_im(), cand.float_re())
            if -1e-12 <= th <= sector + 1e-12:
                if best is None or th < best[0]:
                    best = (th, cand, p, conj_flag)
            cand = cand * phi0
    if best is None:
        raise AssertionError("no sector representative found")
    return best[1], best[2], best[3]


@dataclass
class RotationCandidate:
    """A canonical rotation with its defining pair and new-edge count."""

    psi: ExtendedComplex
    source: tuple[AlgebraicComplex, AlgebraicComplex]
    power_shift: int
    conjugated: bool
    new_edge_count: int
    in_field: bool
    angle_key: float

    def im_float(self) -> float:
        return self.psi.float_im()

    def im_str(self, places: int = 8) -> str:
        lo, hi = self.psi.im.rational_bounds(96)
        v = (lo + hi) / 2
        scaled = v * 10 ** places
        return f"{math.floor(scaled) / 10.0 ** places:.{places}f}"


# -- vectorized candidate sweep --------------------------------------------------


def _pair_solution_angles(zb: np.ndarray, wb: np.ndarray, sector: float):
    """Canonical solution angles for blocks of pairs (vectorized floats)."""
    u = zb * np.conj(wb)
    a, b = u.real, u.imag
    r2 = a * a + b * b
    c = (np.abs(zb) ** 2 + np.abs(wb) ** 2 - 1.0) / 2.0
    d = r2 - c * c
    ok = d >= -1e-12
    s = np.sqrt(np.where(ok, np.maximum(d, 0.0), np.nan))
    out = []
    for sg in (1.0, -1.0):
        x = (a * c - sg * b * s) / r2
        y = (b * c + sg * a * s) / r2
        th = np.arctan2(y, x) % (2 * sector)
        th = np.minimum(th, 2 * sector - th)
        out.append((ok, th))
    return out


class CandidateSweep:
    """Multiplicity of every canonical rotation over all point pairs.

    The multiplicity of a rotation class among ordered-pair solutions is
    2k times its cross-copy edge count (k shifts times the conjugate
    reflection), so one vectorized pass yields every candidate's new-edge
    count at once.
    """

    def __init__(self, Ms: PointSetM, block: int = 96, decimals: int = 10):
        self.Ms = Ms
        self.decimals = decimals
        pres = Ms.presentation
        self.sector = math.pi / pres.k
        pts = Ms.packed_nonzero().floats()
        self.pts = pts
        n = len(pts)
        mult: dict[float, int] = {}
        for i0 in range(0, n, block):
            zb = pts[i0:i0 + block][:, None]
            wb = pts[None, :]
            for si, (ok, th) in enumerate(_pair_solution_angles(zb, wb, self.sector)):
                valid = ok & (th > 1e-9)
                uniq, counts = np.unique(np.round(th[valid], decimals),
                                         return_counts=True)
                for kk, c in zip(uniq.tolist(), counts.tolist()):
                    mult[kk] = mult.get(kk, 0) + c
        # rotation classes that map some point onto another (overlapping copies)
        coinc: set[float] = set()
        for i0 in range(0, n, block):
            zb = pts[i0:i0 + block][:, None]
            wb = pts[None, :]
            eqm = np.abs(np.abs(zb) - np.abs(wb)) < 1e-9
            q = np.where(eqm, zb / wb, 1.0)
            th = np.arctan2(q.imag, q.real) % (2 * self.sector)
            th = np.minimum(th, 2 * self.sector - th)
            for v in np.unique(np.round(th[eqm], decimals)).tolist():
                coinc.add(v)
        self.mult = mult
        self.coinc_sorted = np.array(sorted(coinc))

    def is_overlapping(self, key: float) -> bool:
        c = self.coinc_sorted
        if len(c) == 0:
            return False
        i = np.searchsorted(c, key)
        for j in (i - 1, i):
            if 0 <= j < len(c) and abs(c[j] - key) < 3 * 10.0 ** (-self.decimals):
                return True
        return False

    def edge_count(self, key: float) -> int:
        m = self.mult.get(key, 0)
        k = self.Ms.presentation.k
        sector = self.sector
        # self-conjugate classes (argument 0 or pi/k) appear k times per edge
        if key < 1e-9 or abs(key - sector) < 1e-9:
            return m // k
        return m // (2 * k)


def candidate_keys_from_pairs(Ms: PointSetM, pair_list: Iterable[tuple[int, int]],
                              decimals: int = 10) -> dict[float, tuple[int, int, int]]:
    """Canonical angle keys (with a defining pair) arising from given pairs.

    Pair indices refer to Ms.points[1:] (the nonzero points).
    """
    pts = Ms.packed_nonzero().floats()
    sector = math.pi / Ms.presentation.k
    out: dict[float, tuple[int, int, int]] = {}
    pair_arr = np.array(list(pair_list), dtype=int)
    if len(pair_arr) == 0:
        return out
    B = 4096
    for i0 in range(0, len(pair_arr), B):
        chunk = pair_arr[i0:i0 + B]
        zb = pts[chunk[:, 0]]
        wb = pts[chunk[:, 1]]
        for si, (ok, th) in enumerate(_pair_solution_angles(zb, wb, sector)):
            valid = ok & (th > 1e-9)
            idx = np.nonzero(valid)[0]
            keys = np.round(th[idx], decimals)
            for t, kk in zip(idx.tolist(), keys.tolist()):
                if kk not in out:
                    out[kk] = (int(chunk[t, 0]), int(chunk[t, 1]), 1 - 2 * si)
    return out


def exact_candidate(Ms: PointSetM, pair: tuple[int, int, int]) -> Optional[ExtendedComplex]:
    """Exact canonical rotation from a defining nonzero-point pair."""
    i, j, sg = pair
    z = Ms.points[1 + i]
    w = Ms.points[1 + j]
    sols = solve_unit_rotations(z, w)
    if not sols:
        return None
    pick = sols[0] if sg > 0 or len(sols) == 1 else sols[1]
    canon, _, _ = canonical_rotation(pick, Ms.presentation)
    return canon


def count_new_edges_exact(Ms: PointSetM, psi: ExtendedComplex,
                          window: float = 1e-6, block: int = 256,
                          ) -> list[tuple[int, int]]:
    """Exact unit pairs (u, psi*v) over nonzero points of Ms.

    Indices refer to Ms.points[1:].  Float prefilter plus exact confirmation
    (vectorized in the absorbed-field case, per pair otherwise).
    """
    packed = Ms.packed_nonzero()
    pts = packed.floats()
    psif = complex(psi)
    n = len(pts)
    cand_i: list[np.ndarray] = []
    cand_j: list[np.ndarray] = []
    rot = pts * psif
    for i0 in range(0, n, block):
        d2 = np.abs(pts[i0:i0 + block][:, None] - rot[None, :]) ** 2
        ii, jj = np.nonzero(np.abs(d2 - 1.0) < window)
        cand_i.append(ii + i0)
        cand_j.append(jj)
    ii = np.concatenate(cand_i) if cand_i else np.array([], dtype=int)
    jj = np.concatenate(cand_j) if cand_j else np.array([], dtype=int)
    if len(ii) == 0:
        return []
    if psi.in_field:
        rotated = packed.rotate(psi.as_algebraic())
        ok = confirm_unit_pairs(packed.embed(rotated.basis), rotated, ii, jj)
        return list(zip(ii[ok].tolist(), jj[ok].tolist()))
    out = []
    one = FieldElement.one(psi.re.a.basis)
    base = psi.re.a.basis
    for a, b in zip(ii.tolist(), jj.tolist()):
        u = ExtendedComplex.from_algebraic(Ms.points[1 + a].embed(base))
        v = ExtendedComplex.from_algebraic(Ms.points[1 + b].embed(base))
        d = u - psi * v
        n2 = d.norm2()
        if n2.is_in_field() and n2.as_field() == one:
            out.append((a, b))
    return out


# -- W assembly ------------------------------------------------------------------


def assemble_w(Ms: PointSetM, psi: ExtendedComplex) -> UnitDistanceGraph:
    """udg(M_s u psi*M_s) with edges tagged common (0) / new (1) via labels.

    Vertex order: origin, the nonzero points of M_s, then their rotated
    images.  Labels give the copy: 0 origin, 1 base copy, 2 rotated copy.
    """
    base = psi.re.a.basis
    packed = Ms.packed_nonzero()
    n = packed.n
    common = unit_pairs_within(packed)
    one = FieldElement.one(Ms.presentation.basis)
    if psi.in_field and psi.as_algebraic().embed(base) == \
            AlgebraicComplex.one(base):
        # the two copies coincide: W is just udg(M_s)
        verts = [ExtendedComplex.from_algebraic(p.embed(base)) for p in Ms.points]
        edges = [(1 + i, 1 + j) for i, j in common]
        edges += [(0, 1 + i) for i in range(n) if Ms.points[1 + i].norm2() == one]
        return UnitDistanceGraph("plane", verts, edges, [0] + [1] * n)
    new_edges = count_new_edges_exact(Ms, psi)
    # unit-norm points are adjacent to the shared origin in both copies
    unit_idx = [i for i in range(n)
                if Ms.points[1 + i].norm2() == one]
    verts: list = [ExtendedComplex.from_algebraic(AlgebraicComplex.zero(base))]
    for p in Ms.points[1:]:
        verts.append(ExtendedComplex.from_algebraic(p.embed(base)))
    for p in Ms.points[1:]:
        verts.append(psi * p.embed(base))
    edges = []
    for i, j in common:
        edges.append((1 + i, 1 + j))
        edges.append((1 + n + i, 1 + n + j))
    for i, j in new_edges:
        edges.append((1 + i, 1 + n + j))
    for i in unit_idx:
        edges.append((0, 1 + i))
        edges.append((0, 1 + n + i))
    labels = [0] + [1] * n + [2] * n
    return UnitDistanceGraph("plane", verts, edges, labels)


def moser_subgraph_screen(psi: ExtendedComplex, pres: GroupPresentation) -> bool:
    """Certify the rotated union cannot glue two diamonds into a spindle.

    True iff psi differs from every phi0^q * phi1^p * (5/6 +- sqrt(11)/6 i),
    q in [0, k), p in [-2, 2]; separation is certified by intervals with an
    exact equality check when an interval test is inconclusive.
    """
    b11 = QuadBasis(sorted(set(pres.basis.radicands) | {11}))
    spin_re = FieldElement.from_terms(b11, {(): Fraction(5, 6)})
    spin_im = FieldElement.from_terms(b11, {(11,): Fraction(1, 6)})
    phi0 = pres.phi0.embed(b11)
    phi1 = pres.generators[0].embed(b11)
    psi_re_iv = to_interval(psi.re, 96)
    psi_im_iv = to_interval(psi.im, 96)
    for sign in (1, -1):
        spin = AlgebraicComplex(spin_re, spin_im * sign)
        for p in range(-2, 3):
            base = (phi1 ** p) * spin
            z = base
            for q in range(pres.k):
                # certified separation
                dre = to_interval(z.re, 96) - psi_re_iv
                dim = to_interval(z.im, 96) - psi_im_iv
                if dre.contains_zero() and dim.contains_zero():
                    # exact comparison in the joined structure
                    if psi.in_field:
                        pz = psi.as_algebraic()
                        bigb = pz.basis.join(b11)
                        if pz.embed(bigb) == z.embed(bigb):
                            return False
                    else:
                        # an adjoined (irrational over the base) component
                        # cannot equal the in-field excluded value; refine
                        dre2 = to_interval(psi.re, 512) - to_interval(z.re, 512)
                        dim2 = to_interval(psi.im, 512) - to_interval(z.im, 512)
                        if dre2.contains_zero() and dim2.contains_zero():
                            raise ArithmeticError("screen could not separate psi "
                                                  "from an excluded rotation")
                z = z * phi0
    return True


def psi_in_basis(psi: ExtendedComplex, radicands: Sequence[int]) -> bool:
    """Does psi lie in Q(i, sqrt(d) for d in radicands)?"""
    if not psi.in_field:
        return False
    z = psi.as_algebraic()
    allowed = set()
    target = QuadBasis(radicands)
    for m in list(z.re.coeffs) + list(z.im.coeffs):
        for r in z.basis.subset_of_mask(m):
            allowed.add(r)
    return all(any(r == t or (r % t == 0 and _divides_into(r, target.radicands))
                   for t in target.radicands) or r in target.radicands
               for r in allowed) and _support_in(z, target)


def _divides_into(r: int, rads: Sequence[int]) -> bool:
    rem = r
    for d in rads:
        while rem % d == 0:
            rem //= d
    return rem == 1


# -- enumeration pipeline --------------------------------------------------------


def _real_nonzero_indices(Ms: PointSetM) -> list[int]:
    out = []
    for i, p in enumerate(Ms.points[1:]):
        if p.im.is_zero():
            out.append(i)
    return out


def _extreme_index(Ms: PointSetM) -> int:
    """Index (into nonzero points) of the largest positive real point."""
    best = None
    for i in _real_nonzero_indices(Ms):
        p = Ms.points[1 + i]
        v = p.re.as_rational() if p.re.is_rational() else None
        f = float(p.re)
        if f > 0 and (best is None or f > best[1]):
            best = (i, f)
    if best is None:
        raise ValueError("no positive real point in the set")
    return best[0]


def pair_source_indices(Ms: PointSetM, source: str) -> list[tuple[int, int]]:
    """Pair lists (indices into nonzero points) for a named source.

    extreme      - the largest real point against every nonzero point
    real         - all pairs of real nonzero points
    extreme+real - union of the two
    full         - every unordered pair (quadratic; use for reconciliation)
    """
    n = len(Ms) - 1
    if source == "full":
        return [(i, j) for i in range(n) for j in range(i, n)]
    pairs: set[tuple[int, int]] = set()
    if source in ("extreme", "extreme+real"):
        z0 = _extreme_index(Ms)
        pairs.update((z0, j) for j in range(n))
    if source in ("real", "extreme+real"):
        reals = _real_nonzero_indices(Ms)
        pairs.update((i, j) for i in reals for j in reals)
    if not pairs:
        raise ValueError(f"unknown pair source {source!r}")
    return sorted(pairs)


@dataclass
class CandidateRow:
    """One line of the enumeration report."""

    index: int
    candidate: RotationCandidate
    verdict: str = "unscreened"
    solve_conflicts: int = 0
    solve_seconds: float = 0.0

    def to_json(self) -> dict:
        c = self.candidate
        z, w = c.source
        return {
            "index": self.index,
            "im_psi": c.im_str(),
            "psi": c.psi.to_json(),
            "source_pair": {"z": z.to_json(), "w": w.to_json()},
            "new_edges": c.new_edge_count,
            "verdict": self.verdict,
            "solve_conflicts": self.solve_conflicts,
            "solve_seconds": round(self.solve_seconds, 3),
        }


@dataclass
class EnumerationReport:
    series: int
    sizes: dict
    common_edges: int
    raw_cases: int
    canonical_cases: int
    rows: list[CandidateRow]
    config: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "series": self.series,
            "sizes": self.sizes,
            "common_edges": self.common_edges,
            "raw_cases": self.raw_cases,
            "canonical_cases": self.canonical_cases,
            "config": self.config,
            "candidates": [r.to_json() for r in self.rows],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["index", "im_psi", "psi_json", "source_pair_json",
                    "new_edges", "verdict", "solve_conflicts", "solve_seconds"])
        for r in self.rows:
            j = r.to_json()
            w.writerow([j["index"], j["im_psi"], json.dumps(j["psi"], sort_keys=True),
                        json.dumps(j["source_pair"], sort_keys=True),
                        j["new_edges"], j["verdict"], j["solve_conflicts"],
                        j["solve_seconds"]])
        return buf.getvalue()


def enumerate_candidates(Ms: PointSetM, pair_source: str = "extreme",
                         m2_filter: Optional[PointSetM] = None,
                         decimals: int = 10,
                         sweep: Optional[CandidateSweep] = None,
                         ) -> tuple[list[RotationCandidate], CandidateSweep, int]:
    """Ranked rotation candidates from a pair source.

    Candidates are deduplicated canonically, overlap rotations (which would
    collapse the two copies) are dropped, counts come from the global
    solution sweep, and the list is sorted by new edges descending (ties by
    ascending imaginary part).  With m2_filter, only candidates creating at
    least one edge between the filter set's copies survive.
    """
    if sweep is None:
        sweep = CandidateSweep(Ms, decimals=decimals)
    pairs = pair_source_indices(Ms, pair_source)
    keymap = candidate_keys_from_pairs(Ms, pairs, decimals=decimals)
    raw_cases = len(pairs)
    filter_keys: Optional[np.ndarray] = None
    if m2_filter is not None:
        fsweep = CandidateSweep(m2_filter, decimals=decimals)
        filter_keys = np.array(sorted(fsweep.mult.keys()))
    tol = 3 * 10.0 ** (-decimals)
    cands: list[RotationCandidate] = []
    for key, pair in keymap.items():
        if sweep.is_overlapping(key):
            continue
        if filter_keys is not None:
            i = np.searchsorted(filter_keys, key)
            near = any(0 <= j < len(filter_keys) and abs(filter_keys[j] - key) < tol
                       for j in (i - 1, i))
            if not near:
                continue
        count = sweep.edge_count(key)
        if count <= 0:
            continue
        psi = exact_candidate(Ms, pair)
        if psi is None:
            continue
        z = Ms.points[1 + pair[0]]
        w = Ms.points[1 + pair[1]]
        cands.append(RotationCandidate(
            psi=psi, source=(z, w), power_shift=pair[2], conjugated=False,
            new_edge_count=count, in_field=psi.in_field, angle_key=key))
    cands.sort(key=lambda c: (-c.new_edge_count, c.angle_key))
    return cands, sweep, raw_cases


def screen_candidates(Ms: PointSetM, cands: Sequence[RotationCandidate],
                      limit: int, k: int = 4,
                      budget_seconds: Optional[float] = None,
                      budget_conflicts: Optional[int] = None,
                      seed: int = 0,
                      stop_at_first_unsat: bool = True,
                      checkpoint=None) -> list[CandidateRow]:
    """SAT-screen the first `limit` candidates for k-colorability in order.

    Each candidate's count is re-verified exactly before solving.  Returns
    one row per candidate (including unscreened tail rows).
    """
    from .coloring import solve_k_coloring

    rows = [CandidateRow(index=i + 1, candidate=c) for i, c in enumerate(cands)]
    for i, row in enumerate(rows[:limit]):
        cached = checkpoint.get(row.index) if checkpoint else None
        if cached:
            row.verdict = cached["verdict"]
            row.solve_conflicts = cached["solve_conflicts"]
            row.solve_seconds = cached["solve_seconds"]
        else:
            exact_edges = count_new_edges_exact(Ms, row.candidate.psi)
            row.candidate.new_edge_count = len(exact_edges)
            W = assemble_w(Ms, row.candidate.psi)
            t0 = time.time()
            res = solve_k_coloring(W.abstract(), k,
                                   budget_seconds=budget_seconds,
                                   budget_conflicts=budget_conflicts, seed=seed)
            row.verdict = {"SAT": f"{k}-colorable", "UNSAT": f"not-{k}-colorable",
                           "INDETERMINATE": "indeterminate"}[res.verdict]
            row.solve_conflicts = res.stats.conflicts
            row.solve_seconds = res.stats.elapsed
            if checkpoint is not None:
                checkpoint.put(row.index, {"verdict": row.verdict,
                                           "solve_conflicts": row.solve_conflicts,
                                           "solve_seconds": row.solve_seconds})
        if stop_at_first_unsat and row.verdict == f"not-{k}-colorable":
            break
    return rows


class Checkpoint:
    """Resumable store of screening verdicts, one JSON file."""

    def __init__(self, path):
        from pathlib import Path
        self.path = Path(path)
        self.data: dict[str, dict] = {}
        if self.path.exists():
            self.data = json.loads(self.path.read_text())

    def get(self, index: int) -> Optional[dict]:
        return self.data.get(str(index))

    def put(self, index: int, record: dict) -> None:
        self.data[str(index)] = record
        self.path.write_text(json.dumps(self.data, sort_keys=True))


def series_pipeline(series: int, pair_source: Optional[str] = None,
                    screen_limit: int = 6,
                    budget_seconds: Optional[float] = None,
                    seed: int = 0,
                    use_m2_filter: Optional[bool] = None,
                    checkpoint_path=None) -> EnumerationReport:
    """End-to-end enumeration for one series with default parameters."""
    pres = series_presets(series)
    if series == 1:
        t, clips = 2, [Fraction(1), None]
        default_source = "extreme"
        default_filter = False
    else:
        t, clips = 1, [Fraction(1), None]
        default_source = "extreme+real"
        default_filter = True
    source = pair_source or default_source
    filt = default_filter if use_m2_filter is None else use_m2_filter
    stages = build_stages(pres, t, 3, clips)
    M1, M2, M3 = stages
    # the edge-existence filter uses the unclipped first sum: the clipped
    # stage-2 set creates no cross edges for any of the productive rotations
    filter_set = minkowski_clip_step(M1, M1, None) if filt else None
    common_nz = unit_pairs_within(M3.packed_nonzero())
    one = FieldElement.one(pres.basis)
    origin_deg = sum(1 for p in M3.points[1:] if p.norm2() == one)
    common_total = 2 * (len(common_nz) + origin_deg)
    cands, sweep, raw_cases = enumerate_candidates(
        M3, pair_source=source, m2_filter=filter_set)
    checkpoint = Checkpoint(checkpoint_path) if checkpoint_path else None
    rows = screen_candidates(M3, cands, screen_limit,
                             budget_seconds=budget_seconds, seed=seed,
                             checkpoint=checkpoint)
    return EnumerationReport(
        series=series,
        sizes={"M1": len(M1), "M2": len(M2), "M3": len(M3),
               "W": 2 * len(M3) - 1},
        common_edges=common_total,
        raw_cases=raw_cases,
        canonical_cases=len(cands),
        rows=rows,
        config={"pair_source": source, "screen_limit": screen_limit,
                "m2_filter": filt, "seed": seed, "t": t,
                "clips": [str(c) if c is not None else "inf" for c in clips]})


def _support_in(z: AlgebraicComplex, target: QuadBasis) -> bool:
    for m in list(z.re.coeffs) + list(z.im.coeffs):
        prod = 1
        for r in z.basis.subset_of_mask(m):
            prod *= r
        if prod == 1:
            continue
        if not _divides_into(prod, target.radicands):
            return False
    return True
