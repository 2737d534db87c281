import math
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from udg5.field import FieldElement, QuadBasis
from udg5.interval import (DyadicInterval, di_one, pi_interval, sin_cos_interval,
                           to_interval)

B = QuadBasis([3, 5, 11])


def test_construction_and_contains():
    x = DyadicInterval.from_fraction(Fr(1, 3), 64)
    assert x.contains(Fr(1, 3))
    assert x.width_log2() <= -63
    y = DyadicInterval.from_int(7)
    assert y.lo == y.hi == 7 and y.exp == 0


def test_known_value_enclosure():
    s15_8 = FieldElement.from_terms(B, {(3, 5): Fr(1, 8)})
    iv = to_interval(s15_8, 64)
    assert abs(iv.mid_float() - 0.48412291827) < 1e-10
    assert to_interval(Fr(1, 2), 64).width_log2() == float("-inf")
    with pytest.raises(ValueError):
        to_interval(s15_8, 8)   # below the minimum precision


def test_nesting_precision():
    s15_8 = FieldElement.from_terms(B, {(3, 5): Fr(1, 8)})
    prev = to_interval(s15_8, 32)
    for bits in (64, 128, 256, 512):
        cur = to_interval(s15_8, bits)
        assert prev.contains_interval(cur)
        prev = cur


@settings(max_examples=150, deadline=None)
@given(st.integers(-9, 9), st.integers(1, 9), st.integers(-9, 9), st.integers(1, 9),
       st.integers(-9, 9), st.integers(1, 9))
def test_arithmetic_encloses_exact(p1, q1, p2, q2, p3, q3):
    a, b, c = Fr(p1, q1), Fr(p2, q2), Fr(p3, q3)
    ia = DyadicInterval.from_fraction(a, 72)
    ib = DyadicInterval.from_fraction(b, 72)
    ic = DyadicInterval.from_fraction(c, 72)
    assert ((ia + ib) * ic).contains((a + b) * c)
    assert (ia - ib).contains(a - b)
    assert ia.square().contains(a * a)
    if c != 0:
        assert (ia / ic).contains(a / c)
    else:
        with pytest.raises(ZeroDivisionError):
            ia / ic


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 9), st.integers(1, 10 ** 6))
def test_sqrt_encloses(p, q):
    v = Fr(p, q)
    iv = DyadicInterval.from_fraction(v, 80).sqrt()
    assert iv.square().contains(v) or iv.contains(v.__class__(0))
    # containment of the true root via rational bounds
    s = 1 << 40
    lo = Fr(math.isqrt(p * q * s * s), q * s)
    assert iv.hi_fraction() >= lo


def test_sign_and_queries():
    x = DyadicInterval.from_bounds(Fr(1, 5), Fr(1, 4), 64)
    assert x.sign() == 1 and not x.contains_zero()
    y = DyadicInterval.from_bounds(Fr(-1, 5), Fr(1, 4), 64)
    assert y.sign() is None and y.contains_zero()
    assert DyadicInterval.from_int(0).sign() == 0
    assert x.abs_lt(Fr(1, 2)) and not x.abs_lt(Fr(1, 5))


def test_pi_and_trig():
    p = pi_interval(128)
    assert abs(p.mid_float() - math.pi) < 1e-30 or abs(p.mid_float() - math.pi) < 1e-15
    assert p.width_log2() < -120
    th = p.scale(Fr(1, 10))
    s, c = sin_cos_interval(th)
    # cos(pi/10)^2 must equal (5+sqrt5)/8
    r1sq = FieldElement.from_terms(QuadBasis([5]), {(): Fr(5, 8), (5,): Fr(1, 8)})
    diff = c.square() - to_interval(r1sq, 128)
    assert diff.contains_zero() and diff.width_log2() < -100
    assert (s.square() + c.square()).contains(Fr(1))
    with pytest.raises(ValueError):
        sin_cos_interval(DyadicInterval.from_int(3, 64))


def test_outward_rounding_is_dyadic():
    # 1/3 rounded outward at 8-bit granularity spans the true value
    x = DyadicInterval.from_fraction(Fr(1, 3), 16)
    assert x.lo_fraction() < Fr(1, 3) < x.hi_fraction()
    # interval operations never lose containment through normalization
    acc = x
    for _ in range(40):
        acc = acc * x
    assert acc.contains(Fr(1, 3) ** 41)


def test_decimal_str_round_trip_bounds():
    x = DyadicInterval.from_bounds(Fr(-1, 7), Fr(1, 9), 64)
    s = x.decimal_str(12)
    assert s.startswith("[") and s.endswith("]@64")
