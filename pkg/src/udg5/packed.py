"""Vectorized exact arithmetic for large point sets.

A batch of multiquadratic complex points becomes two int64 coefficient
matrices over a common denominator.  Squared distances are then integer
bilinear forms, so unit-distance tests run exactly over numpy after a float
prefilter proposes candidate pairs.  Heights stay tiny (sums of a few unit
generators), leaving int64 headroom of many orders of magnitude.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .field import AlgebraicComplex, FieldElement, QuadBasis


class PackedPoints:
    """Exact coefficient matrices for a list of same-basis complex points."""

    def __init__(self, basis: QuadBasis, denom: int,
                 re: np.ndarray, im: np.ndarray):
        self.basis = basis
        self.denom = denom
        self.re = re  # (n, dim) int64, coefficient numerators * denom
        self.im = im
        self._floats: Optional[np.ndarray] = None

    @staticmethod
    def from_points(points: Sequence[AlgebraicComplex]) -> "PackedPoints":
        if not points:
            raise ValueError("empty point list")
        basis = points[0].basis
        dim = basis.dim
        denom = 1
        for p in points:
            for c in list(p.re.coeffs.values()) + list(p.im.coeffs.values()):
                denom = denom * c.denominator // math.gcd(denom, c.denominator)
        n = len(points)
        re = np.zeros((n, dim), dtype=np.int64)
        im = np.zeros((n, dim), dtype=np.int64)
        for i, p in enumerate(points):
            if p.basis is not basis:
                raise ValueError("mixed bases in packed batch")
            for m, c in p.re.coeffs.items():
                re[i, m] = c.numerator * (denom // c.denominator)
            for m, c in p.im.coeffs.items():
                im[i, m] = c.numerator * (denom // c.denominator)
        return PackedPoints(basis, denom, re, im)

    @property
    def n(self) -> int:
        return self.re.shape[0]

    def point(self, i: int) -> AlgebraicComplex:
        basis = self.basis
        d = Fraction(1, self.denom)
        re = FieldElement(basis, {m: v * d for m, v in enumerate(self.re[i].tolist()) if v})
        im = FieldElement(basis, {m: v * d for m, v in enumerate(self.im[i].tolist()) if v})
        return AlgebraicComplex(re, im)

    def floats(self) -> np.ndarray:
        if self._floats is None:
            vals = np.array([self.basis.radical_value(m)
                             for m in range(self.basis.dim)])
            re = (self.re @ vals) / self.denom
            im = (self.im @ vals) / self.denom
            self._floats = re + 1j * im
        return self._floats

    def rotate(self, psi: AlgebraicComplex) -> "PackedPoints":
        """Exact multiplication of every point by a fixed complex number."""
        basis = psi.basis
        if not basis.contains(self.basis):
            raise ValueError("rotation basis must contain the point basis")
        src = self
        if basis is not self.basis:
            src = self.embed(basis)
        pd = 1
        for c in list(psi.re.coeffs.values()) + list(psi.im.coeffs.values()):
            pd = pd * c.denominator // math.gcd(pd, c.denominator)
        dim = basis.dim
        pr = np.zeros(dim, dtype=np.int64)
        pi = np.zeros(dim, dtype=np.int64)
        for m, c in psi.re.coeffs.items():
            pr[m] = c.numerator * (pd // c.denominator)
        for m, c in psi.im.coeffs.items():
            pi[m] = c.numerator * (pd // c.denominator)
        tab = basis.mul_table()
        out_re = np.zeros_like(src.re)
        out_im = np.zeros_like(src.im)
        for m1 in range(dim):
            row = tab[m1]
            a_r, a_i = int(pr[m1]), int(pi[m1])
            if a_r == 0 and a_i == 0:
                continue
            for m2 in range(dim):
                t, f = row[m2]
                xr = src.re[:, m2]
                xi = src.im[:, m2]
                if a_r:
                    out_re[:, t] += a_r * f * xr
                    out_im[:, t] += a_r * f * xi
                if a_i:
                    out_re[:, t] -= a_i * f * xi
                    out_im[:, t] += a_i * f * xr
        return PackedPoints(basis, src.denom * pd, out_re, out_im)

    def embed(self, basis: QuadBasis) -> "PackedPoints":
        if basis is self.basis:
            return self
        if not basis.contains(self.basis):
            raise ValueError("cannot embed into a smaller basis")
        remap = [basis.mask_of_subset(self.basis.subset_of_mask(m))
                 for m in range(self.basis.dim)]
        re = np.zeros((self.n, basis.dim), dtype=np.int64)
        im = np.zeros((self.n, basis.dim), dtype=np.int64)
        for m_old, m_new in enumerate(remap):
            re[:, m_new] = self.re[:, m_old]
            im[:, m_new] = self.im[:, m_old]
        return PackedPoints(basis, self.denom, re, im)


def _bilinear_norm2(basis: QuadBasis, dr: np.ndarray, di: np.ndarray) -> np.ndarray:
    """Exact |dz|^2 coefficients: (npairs, dim) int64; value / denom^2."""
    dim = basis.dim
    tab = basis.mul_table()
    out = np.zeros_like(dr)
    for m1 in range(dim):
        row = tab[m1]
        a = dr[:, m1]
        b = di[:, m1]
        if not a.any() and not b.any():
            continue
        for m2 in range(dim):
            t, f = row[m2]
            out[:, t] += f * (a * dr[:, m2] + b * di[:, m2])
    return out


def confirm_unit_pairs(A: PackedPoints, B: PackedPoints,
                       ii: np.ndarray, jj: np.ndarray) -> np.ndarray:
    """Exact mask: |A[i] - B[j]|^2 == 1 for candidate index arrays."""
    if A.basis is not B.basis:
        basis = A.basis.join(B.basis)
        A = A.embed(basis)
        B = B.embed(basis)
    if A.denom != B.denom:
        lcm = A.denom * B.denom // math.gcd(A.denom, B.denom)
        fa, fb = lcm // A.denom, lcm // B.denom
        dr = A.re[ii] * fa - B.re[jj] * fb
        di = A.im[ii] * fa - B.im[jj] * fb
        den2 = lcm * lcm
    else:
        dr = A.re[ii] - B.re[jj]
        di = A.im[ii] - B.im[jj]
        den2 = A.denom * A.denom
    q = _bilinear_norm2(A.basis, dr, di)
    ok = q[:, 0] == den2
    if q.shape[1] > 1:
        ok &= ~np.any(q[:, 1:], axis=1)
    return ok


def unit_pairs_within(P: PackedPoints, block: int = 256,
                      window: float = 1e-6) -> list[tuple[int, int]]:
    """All unordered unit-distance pairs inside one point set, exactly.

    Float prefilter with a window orders of magnitude above the evaluation
    error proposes candidates; every candidate is confirmed by the integer
    bilinear form.
    """
    pts = P.floats()
    n = P.n
    out_i = []
    out_j = []
    for i0 in range(0, n, block):
        blk = pts[i0:i0 + block]
        d2 = np.abs(blk[:, None] - pts[None, :]) ** 2
        ii, jj = np.nonzero(np.abs(d2 - 1.0) < window)
        keep = (i0 + ii) < jj
        out_i.append(ii[keep] + i0)
        out_j.append(jj[keep])
    ii = np.concatenate(out_i) if out_i else np.array([], dtype=int)
    jj = np.concatenate(out_j) if out_j else np.array([], dtype=int)
    if len(ii) == 0:
        return []
    ok = confirm_unit_pairs(P, P, ii, jj)
    return list(zip(ii[ok].tolist(), jj[ok].tolist()))


def unit_pairs_between(A: PackedPoints, B: PackedPoints, block: int = 256,
                       window: float = 1e-6) -> list[tuple[int, int]]:
    """All unit-distance pairs (i in A, j in B), exactly."""
    pa = A.floats()
    pb = B.floats()
    out_i = []
    out_j = []
    for i0 in range(0, A.n, block):
        blk = pa[i0:i0 + block]
        d2 = np.abs(blk[:, None] - pb[None, :]) ** 2
        ii, jj = np.nonzero(np.abs(d2 - 1.0) < window)
        out_i.append(ii + i0)
        out_j.append(jj)
    ii = np.concatenate(out_i) if out_i else np.array([], dtype=int)
    jj = np.concatenate(out_j) if out_j else np.array([], dtype=int)
    if len(ii) == 0:
        return []
    ok = confirm_unit_pairs(A, B, ii, jj)
    return list(zip(ii[ok].tolist(), jj[ok].tolist()))
