import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from udg5.field import (AdjoinedElement, AlgebraicComplex, FieldElement,
                        QuadBasis, adjoin_solve_quadratic, fe_arith, fe_sign,
                        try_absorb_radicand, unify)

B = QuadBasis([3, 11])
B235 = QuadBasis([2, 3, 5])


def rand_fe(rng, basis=B, span=6):
    terms = {}
    for m in range(basis.dim):
        if rng.random() < 0.7:
            terms[basis.subset_of_mask(m)] = Fr(rng.randint(-span, span),
                                                rng.randint(1, span))
    return FieldElement.from_terms(basis, terms)


def test_basis_validation():
    with pytest.raises(ValueError):
        QuadBasis([4])        # not square-free
    with pytest.raises(ValueError):
        QuadBasis([2, 6])     # not coprime
    with pytest.raises(ValueError):
        QuadBasis([1])
    assert QuadBasis([11, 3]).radicands == (3, 11)


def test_field_axioms_randomized():
    rng = random.Random(20240817)
    one = FieldElement.one(B)
    for _ in range(1000):
        x, y, z = (rand_fe(rng) for _ in range(3))
        assert (x + y) + z == x + (y + z)
        assert x * (y + z) == x * y + x * z
        assert x * y == y * x
        if not x.is_zero():
            assert x / x == one
            assert (x * y) / x == y


def test_field_axioms_second_basis():
    rng = random.Random(99)
    for _ in range(1000):
        x, y = (rand_fe(rng, B235, 4) for _ in range(2))
        assert (x * y) - (y * x) == FieldElement.zero(B235)
        assert (x + y) - y == x


def test_radical_products_reduce():
    s2 = FieldElement.sqrt_of_radicand(B235, 2)
    s3 = FieldElement.sqrt_of_radicand(B235, 3)
    s6 = FieldElement.sqrt_of_radicand(B235, 6)
    assert s2 * s3 == s6
    assert s6 * s6 == FieldElement.from_rational(B235, 6)


def test_norm_of_unit_generators():
    # series-1 generator: sqrt(33)/6 + sqrt(3)/6 i
    phi1 = AlgebraicComplex.make(B, {(3, 11): Fr(1, 6)}, {(3,): Fr(1, 6)})
    assert phi1.norm2() == FieldElement.one(B)
    # series-2 24th root of unity
    b23 = QuadBasis([2, 3])
    phi0 = AlgebraicComplex.make(
        b23, {(2, 3): Fr(1, 4), (2,): Fr(1, 4)},
        {(2, 3): Fr(1, 4), (2,): Fr(-1, 4)})
    assert phi0.norm2() == FieldElement.one(b23)
    assert phi0 ** 24 == AlgebraicComplex.one(b23)
    assert phi0 ** 12 == -AlgebraicComplex.one(b23)


def test_sign_determination():
    assert fe_sign(FieldElement.zero(B)) == 0
    s2m1 = FieldElement.from_terms(QuadBasis([2]), {(2,): 1, (): -1})
    assert s2m1.sign() == 1
    # sign of an exact square difference is syntactic zero
    x = FieldElement.from_terms(B235, {(3, 5): Fr(1, 8)})
    q = FieldElement.from_rational(B235, Fr(15, 64))
    assert (q - x * x).sign() == 0
    # nearly-cancelling Pell combination (665857*sqrt2 - 941664 ~ 5.3e-7)
    close = FieldElement.from_terms(
        QuadBasis([2]), {(2,): Fr(665857), (): Fr(-941664)})
    assert close.sign() == 1
    assert (-close).sign() == -1


def test_fe_arith_dispatch_and_errors():
    x = FieldElement.from_rational(B, 3)
    y = FieldElement.from_rational(B, 2)
    assert fe_arith(x, y, "sub").as_rational() == 1
    with pytest.raises(ZeroDivisionError):
        fe_arith(x, FieldElement.zero(B), "div")
    with pytest.raises(ValueError):
        FieldElement.sqrt_of_radicand(B, 7)


def test_sqrt_in_field():
    x = FieldElement.from_rational(B235, Fr(15, 64))
    r = x.sqrt()
    assert r is not None and r * r == x and r.sign() > 0
    # not a square in the smaller basis
    assert FieldElement.from_rational(B, Fr(15, 64)).sqrt() is None
    # nested: sqrt(3 + 2*sqrt(2)) = 1 + sqrt(2)
    b2 = QuadBasis([2])
    v = FieldElement.from_terms(b2, {(): 3, (2,): 2})
    r = v.sqrt()
    assert r == FieldElement.from_terms(b2, {(): 1, (2,): 1})


def test_adjoin_solve_quadratic():
    zero = FieldElement.zero(B235)
    one = FieldElement.one(B235)
    # t^2 - 2t + 1: double root 1
    roots = adjoin_solve_quadratic(FieldElement.from_rational(B235, -2), one)
    assert len(roots) == 1 and roots[0].is_in_field()
    assert roots[0].as_field() == one
    # t^2 - 15/64: in-field roots after basis absorption
    roots = adjoin_solve_quadratic(zero, FieldElement.from_rational(B235, Fr(-15, 64)))
    assert len(roots) == 2
    vals = sorted(float(r) for r in roots)
    assert abs(vals[1] - 0.484122918275) < 1e-12
    # t^2 + 1: no real roots
    assert adjoin_solve_quadratic(zero, one) == []
    # genuinely adjoined case: t^2 - (1 + sqrt(3)) over Q(sqrt3, sqrt11)
    disc = FieldElement.from_terms(B, {(): 1, (3,): 1})
    roots = adjoin_solve_quadratic(FieldElement.zero(B), -disc)
    assert len(roots) == 2 and not roots[0].is_in_field()
    r = roots[0]
    assert (r * r - AdjoinedElement.from_field(disc)).is_zero()


def test_adjoined_normalizes_square_radicand():
    # radicand 4 is a perfect square: representation collapses to the field
    a = FieldElement.from_rational(B, 1)
    b = FieldElement.from_rational(B, 2)
    rad = FieldElement.from_rational(B, 4)
    x = AdjoinedElement(a, b, rad)
    assert x.is_in_field() and x.as_field().as_rational() == 5


def test_try_absorb():
    d = FieldElement.from_rational(B, Fr(15, 4))
    res = try_absorb_radicand(d)
    assert res is not None
    ext, root = res
    assert 5 in ext.radicands
    assert root * root == d.embed(ext)


def test_unify_and_embedding():
    x = FieldElement.sqrt_of_radicand(QuadBasis([3]), 3)
    y = FieldElement.sqrt_of_radicand(QuadBasis([5]), 5)
    a, b = unify(x, y)
    assert a.basis is b.basis
    assert (a * b) == FieldElement.sqrt_of_radicand(a.basis, 15)


def test_json_round_trip():
    rng = random.Random(5)
    for _ in range(50):
        x = rand_fe(rng)
        assert FieldElement.from_json(x.to_json()) == x
    z = AlgebraicComplex.make(B, {(): Fr(-1, 2)}, {(3, 11): Fr(1, 6)})
    assert AlgebraicComplex.from_json(z.to_json()) == z


@settings(max_examples=200, deadline=None)
@given(st.integers(-50, 50), st.integers(1, 30), st.integers(-50, 50), st.integers(1, 30))
def test_rational_bounds_contain_value(p1, q1, p2, q2):
    x = FieldElement.from_terms(B, {(): Fr(p1, q1), (3,): Fr(p2, q2)})
    lo, hi = x.rational_bounds(80)
    # independent rational enclosure of sqrt(3)
    import math
    s = 10 ** 12
    r3lo = Fr(math.isqrt(3 * s * s), s)
    r3hi = Fr(math.isqrt(3 * s * s) + 1, s)
    c = Fr(p2, q2)
    vlo = Fr(p1, q1) + (c * r3lo if c >= 0 else c * r3hi)
    vhi = Fr(p1, q1) + (c * r3hi if c >= 0 else c * r3lo)
    assert lo <= vhi and vlo <= hi
    assert hi - lo <= Fr(1, 1 << 60)
