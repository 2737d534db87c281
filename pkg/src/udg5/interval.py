"""Certified interval arithmetic on dyadic rationals.

Endpoints are integers times a shared power of two, and every operation
rounds outward, so each result interval encloses the exact value.  All
rounding happens on nested dyadic grids: re-running at higher precision
always produces an interval contained in the lower-precision one.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Union

from .field import AdjoinedElement, FieldElement


class DyadicInterval:
    """[lo, hi] * 2^exp with outward rounding to `bits` precision."""

    __slots__ = ("lo", "hi", "exp", "bits")

    def __init__(self, lo: int, hi: int, exp: int, bits: int, normalize: bool = True):
        if normalize:
            top = max(lo.bit_length(), hi.bit_length())
            if top > bits + 8:
                s = top - bits
                lo >>= s
                hi = -((-hi) >> s)
                exp += s
        if lo > hi:
            raise ValueError("interval endpoints out of order")
        self.lo = lo
        self.hi = hi
        self.exp = exp
        self.bits = bits

    # -- constructors --------------------------------------------------------

    @staticmethod
    def from_int(n: int, bits: int = 64) -> "DyadicInterval":
        return DyadicInterval(n, n, 0, bits, normalize=False)

    @staticmethod
    def from_fraction(q: Fraction, bits: int = 64) -> "DyadicInterval":
        num, den = q.numerator, q.denominator
        if den == 1:
            return DyadicInterval(num, num, 0, bits, normalize=False)
        scaled = num << bits
        lo = scaled // den
        hi = lo if lo * den == scaled else lo + 1
        return DyadicInterval(lo, hi, -bits, bits, normalize=False)

    @staticmethod
    def from_bounds(lo: Fraction, hi: Fraction, bits: int = 64) -> "DyadicInterval":
        a = DyadicInterval.from_fraction(Fraction(lo), bits)
        b = DyadicInterval.from_fraction(Fraction(hi), bits)
        e = min(a.exp, b.exp)
        return DyadicInterval(a.lo << (a.exp - e), b.hi << (b.exp - e), e, bits)

    @staticmethod
    def from_field_element(x: Union[FieldElement, AdjoinedElement],
                           bits: int = 64) -> "DyadicInterval":
        lo, hi = x.rational_bounds(bits + 16)
        return DyadicInterval.from_bounds(lo, hi, bits)

    @staticmethod
    def from_float(x: float, bits: int = 64) -> "DyadicInterval":
        f = Fraction(x)
        return DyadicInterval.from_fraction(f, bits)

    # -- views ----------------------------------------------------------------

    def lo_fraction(self) -> Fraction:
        e = self.exp
        return Fraction(self.lo, 1 << -e) if e < 0 else Fraction(self.lo << e)

    def hi_fraction(self) -> Fraction:
        e = self.exp
        return Fraction(self.hi, 1 << -e) if e < 0 else Fraction(self.hi << e)

    def mid_float(self) -> float:
        m = (self.lo + self.hi) / 2
        return math.ldexp(m, self.exp) if abs(self.exp) < 1000 else float(
            (self.lo_fraction() + self.hi_fraction()) / 2)

    def width_fraction(self) -> Fraction:
        return self.hi_fraction() - self.lo_fraction()

    def width_log2(self) -> float:
        w = self.hi - self.lo
        if w == 0:
            return float("-inf")
        return math.log2(w) + self.exp

    def __float__(self) -> float:
        return self.mid_float()

    def __repr__(self) -> str:
        return f"[{self.mid_float():.12g}±2^{self.width_log2():.0f}]@{self.bits}"

    def decimal_str(self, places: int = 12) -> str:
        lo, hi = self.lo_fraction(), self.hi_fraction()
        scale = 10 ** places
        lo_s = math.floor(lo * scale) / Fraction(scale)
        hi_s = math.ceil(hi * scale) / Fraction(scale)
        return f"[{float(lo_s):.{places}f},{float(hi_s):.{places}f}]@{self.bits}"

    # -- queries ---------------------------------------------------------------

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def contains(self, q: Fraction) -> bool:
        return self.lo_fraction() <= q <= self.hi_fraction()

    def contains_interval(self, other: "DyadicInterval") -> bool:
        return (self.lo_fraction() <= other.lo_fraction()
                and other.hi_fraction() <= self.hi_fraction())

    def sign(self) -> Optional[int]:
        """Certified sign: +1, -1, 0 (degenerate [0,0]) or None (straddles)."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == 0 and self.hi == 0:
            return 0
        return None

    def abs_lt(self, q: Fraction) -> bool:
        """Certifies |value| < q."""
        return -q < self.lo_fraction() and self.hi_fraction() < q

    def abs_le_pow2(self, log2q: int) -> bool:
        return self.abs_lt(Fraction(1, 1) * Fraction(2) ** log2q)

    # -- arithmetic --------------------------------------------------------------

    def _align(self, other: "DyadicInterval") -> tuple[int, int, int, int, int]:
        e = min(self.exp, other.exp)
        s1 = self.exp - e
        s2 = other.exp - e
        return (self.lo << s1, self.hi << s1, other.lo << s2, other.hi << s2, e)

    def __add__(self, other: "DyadicInterval") -> "DyadicInterval":
        a, b, c, d, e = self._align(other)
        return DyadicInterval(a + c, b + d, e, max(self.bits, other.bits))

    def __sub__(self, other: "DyadicInterval") -> "DyadicInterval":
        a, b, c, d, e = self._align(other)
        return DyadicInterval(a - d, b - c, e, max(self.bits, other.bits))

    def __neg__(self) -> "DyadicInterval":
        return DyadicInterval(-self.hi, -self.lo, self.exp, self.bits, normalize=False)

    def __mul__(self, other: "DyadicInterval") -> "DyadicInterval":
        p1 = self.lo * other.lo
        p2 = self.lo * other.hi
        p3 = self.hi * other.lo
        p4 = self.hi * other.hi
        return DyadicInterval(min(p1, p2, p3, p4), max(p1, p2, p3, p4),
                              self.exp + other.exp, max(self.bits, other.bits))

    def scale(self, q: Fraction) -> "DyadicInterval":
        return self * DyadicInterval.from_fraction(Fraction(q), self.bits)

    def square(self) -> "DyadicInterval":
        if self.lo >= 0:
            lo, hi = self.lo * self.lo, self.hi * self.hi
        elif self.hi <= 0:
            lo, hi = self.hi * self.hi, self.lo * self.lo
        else:
            lo, hi = 0, max(self.lo * self.lo, self.hi * self.hi)
        return DyadicInterval(lo, hi, 2 * self.exp, self.bits)

    def sqrt(self) -> "DyadicInterval":
        if self.hi < 0:
            raise ValueError("sqrt of a negative interval")
        lo, hi, e = self.lo, self.hi, self.exp
        if lo < 0:
            lo = 0
        # pad to even exponent and to working precision
        t = 2 * self.bits + (e & 1)
        lo <<= t
        hi <<= t
        e -= t
        rl = math.isqrt(lo)
        rh = math.isqrt(hi)
        if rh * rh != hi:
            rh += 1
        return DyadicInterval(rl, rh, e // 2, self.bits)

    def inverse(self) -> "DyadicInterval":
        if self.contains_zero():
            raise ZeroDivisionError("interval straddles zero")
        lo_f = 1 / self.hi_fraction()
        hi_f = 1 / self.lo_fraction()
        return DyadicInterval.from_bounds(lo_f, hi_f, self.bits)

    def __truediv__(self, other: "DyadicInterval") -> "DyadicInterval":
        return self * other.inverse()

    def union(self, other: "DyadicInterval") -> "DyadicInterval":
        a, b, c, d, e = self._align(other)
        return DyadicInterval(min(a, c), max(b, d), e, max(self.bits, other.bits))

    def widen_pow2(self, log2pad: int) -> "DyadicInterval":
        pad = DyadicInterval(-1, 1, log2pad, self.bits, normalize=False)
        return self + pad

    def at_bits(self, bits: int) -> "DyadicInterval":
        return DyadicInterval(self.lo, self.hi, self.exp, bits)


def di_zero(bits: int = 64) -> DyadicInterval:
    return DyadicInterval(0, 0, 0, bits, normalize=False)


def di_one(bits: int = 64) -> DyadicInterval:
    return DyadicInterval(1, 1, 0, bits, normalize=False)


def to_interval(x: Union[FieldElement, AdjoinedElement, Fraction, int],
                bits: int = 64) -> DyadicInterval:
    """Certified enclosure of an exact value at the requested precision."""
    if bits < 16:
        raise ValueError("precision below 16 bits")
    if isinstance(x, (FieldElement, AdjoinedElement)):
        return DyadicInterval.from_field_element(x, bits)
    return DyadicInterval.from_fraction(Fraction(x), bits)


def pi_interval(bits: int = 64) -> DyadicInterval:
    """Enclosure of pi by Machin's formula with explicit tail bounds."""
    work = bits + 32
    scale = 1 << work

    def atan_inv(n: int) -> tuple[int, int]:
        # arctan(1/n) * scale, lower and upper integer bounds
        total_lo = 0
        total_hi = 0
        term = scale // n
        n2 = n * n
        k = 0
        power = scale // n  # 1/n^(2k+1) scaled, floor
        while True:
            contrib = power // (2 * k + 1)
            if k % 2 == 0:
                total_lo += contrib
                total_hi += contrib + 1
            else:
                total_lo -= contrib + 1
                total_hi -= contrib
            if contrib == 0:
                break
            power //= n2
            k += 1
        return total_lo - 2, total_hi + 2

    a_lo, a_hi = atan_inv(5)
    b_lo, b_hi = atan_inv(239)
    pi_lo = 16 * a_lo - 4 * b_hi
    pi_hi = 16 * a_hi - 4 * b_lo
    return DyadicInterval(pi_lo, pi_hi, -work, bits)


def sin_cos_interval(theta: DyadicInterval) -> tuple[DyadicInterval, DyadicInterval]:
    """Certified (sin, cos) for |theta| <= 2 via Taylor series with tail bound.

    The alternating series remainder after the k-th term is bounded by the
    next term, which we widen into the result.
    """
    if not theta.abs_lt(Fraction(2)):
        raise ValueError("sin_cos_interval needs |theta| <= 2")
    bits = theta.bits
    one = di_one(bits)
    x2 = theta.square()
    # sin = x * (1 - x^2/6 + x^4/120 - ...), cos = 1 - x^2/2 + x^4/24 - ...
    sin_acc = DyadicInterval.from_int(0, bits)
    cos_acc = DyadicInterval.from_int(0, bits)
    term_s = theta
    term_c = one
    k = 0
    while True:
        sin_acc = sin_acc + term_s
        cos_acc = cos_acc + term_c
        term_s = -(term_s * x2).scale(Fraction(1, (2 * k + 2) * (2 * k + 3)))
        term_c = -(term_c * x2).scale(Fraction(1, (2 * k + 1) * (2 * k + 2)))
        k += 1
        bound = max(abs(term_s.lo), abs(term_s.hi), abs(term_c.lo), abs(term_c.hi))
        if bound == 0 or (math.log2(bound + 1) + term_s.exp) < -(bits + 4):
            break
        if k > 200:
            raise ArithmeticError("sin/cos series failed to converge")
    pad_exp = -(bits + 2)
    return sin_acc.widen_pow2(pad_exp), cos_acc.widen_pow2(pad_exp)
