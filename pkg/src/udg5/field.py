"""Exact arithmetic in multiquadratic number fields.

An element of Q(sqrt(d1), ..., sqrt(dm)) is a rational linear combination of
the 2^m products of distinct radicals.  We store the coefficient map sparsely,
keyed by a bitmask over the basis radicands, with all-zero coefficients
dropped.  That makes equality and the zero test purely syntactic, which is
what every downstream "is this distance exactly 1" decision relies on.

Radicands must be pairwise coprime square-free integers > 1, so products of
radicals reduce uniquely (sqrt(2)*sqrt(6) has no home here, but {2,3} gives
sqrt(2)*sqrt(3) = sqrt(6) as the {2,3} basis product).
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Union

Rat = Union[int, Fraction]

_MAX_RADICANDS = 6


def _squarefree_part(n: int) -> tuple[int, int]:
    """Decompose n = s * f^2 with s square-free; returns (s, f).  n > 0."""
    s, f = 1, 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            if e % 2:
                s *= d
            f *= d ** (e // 2)
        d += 1 if d == 2 else 2
    return s * n, f


def _is_squarefree(n: int) -> bool:
    s, f = _squarefree_part(n)
    return f == 1


class QuadBasis:
    """An ordered list of pairwise-coprime square-free radicands."""

    __slots__ = ("radicands", "_mul_table", "_index")

    _registry: dict[tuple[int, ...], "QuadBasis"] = {}

    def __new__(cls, radicands: Iterable[int]) -> "QuadBasis":
        rads = tuple(sorted(set(int(r) for r in radicands)))
        if rads in cls._registry:
            return cls._registry[rads]
        for r in rads:
            if r <= 1:
                raise ValueError(f"radicand {r} must be > 1")
            if not _is_squarefree(r):
                raise ValueError(f"radicand {r} is not square-free")
        for i, a in enumerate(rads):
            for b in rads[i + 1:]:
                if math.gcd(a, b) != 1:
                    raise ValueError(f"radicands {a} and {b} are not coprime")
        if len(rads) > _MAX_RADICANDS:
            raise ValueError(f"more than {_MAX_RADICANDS} radicands")
        self = object.__new__(cls)
        self.radicands = rads
        self._index = {r: i for i, r in enumerate(rads)}
        self._mul_table = None
        cls._registry[rads] = self
        return self

    @property
    def dim(self) -> int:
        return 1 << len(self.radicands)

    def mul_table(self) -> list[list[tuple[int, int]]]:
        """table[m1][m2] = (m1 ^ m2, product of radicands in m1 & m2)."""
        if self._mul_table is None:
            n = self.dim
            rads = self.radicands
            tab = []
            for m1 in range(n):
                row = []
                for m2 in range(n):
                    c = m1 & m2
                    f = 1
                    i = 0
                    while c:
                        if c & 1:
                            f *= rads[i]
                        c >>= 1
                        i += 1
                    row.append((m1 ^ m2, f))
                tab.append(row)
            self._mul_table = tab
        return self._mul_table

    def mask_of_subset(self, subset: Iterable[int]) -> int:
        m = 0
        for r in subset:
            i = self._index.get(r)
            if i is None:
                raise ValueError(f"radicand {r} not in basis {self.radicands}")
            m |= 1 << i
        return m

    def subset_of_mask(self, mask: int) -> tuple[int, ...]:
        return tuple(r for i, r in enumerate(self.radicands) if mask >> i & 1)

    def radical_value(self, mask: int) -> float:
        v = 1.0
        for i, r in enumerate(self.radicands):
            if mask >> i & 1:
                v *= math.sqrt(r)
        return v

    def extend(self, radicand: int) -> "QuadBasis":
        """Basis with one more radicand; validates coprimality."""
        return QuadBasis(self.radicands + (radicand,))

    def contains(self, other: "QuadBasis") -> bool:
        return set(other.radicands) <= set(self.radicands)

    def join(self, other: "QuadBasis") -> "QuadBasis":
        return QuadBasis(set(self.radicands) | set(other.radicands))

    def __repr__(self) -> str:
        return f"QuadBasis{self.radicands}"


@lru_cache(maxsize=None)
def _sqrt_bounds(d: int, bits: int) -> tuple[Fraction, Fraction]:
    """Rational enclosure of sqrt(d) with width 2^-bits."""
    scale = 1 << bits
    lo = math.isqrt(d * scale * scale)
    return Fraction(lo, scale), Fraction(lo + 1, scale)


class FieldElement:
    """An exact element of a multiquadratic field."""

    __slots__ = ("basis", "coeffs", "_hash", "_float")

    def __init__(self, basis: QuadBasis, coeffs: dict[int, Fraction]):
        self.basis = basis
        self.coeffs = coeffs  # mask -> nonzero Fraction; never mutated
        self._hash = None
        self._float = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rational(basis: QuadBasis, value: Rat) -> "FieldElement":
        v = Fraction(value)
        return FieldElement(basis, {0: v} if v else {})

    @staticmethod
    def from_terms(basis: QuadBasis, terms: dict[tuple[int, ...], Rat]) -> "FieldElement":
        """terms maps radicand subsets (tuples) to rational coefficients."""
        coeffs: dict[int, Fraction] = {}
        for subset, c in terms.items():
            c = Fraction(c)
            if not c:
                continue
            m = basis.mask_of_subset(subset)
            coeffs[m] = coeffs.get(m, Fraction(0)) + c
            if not coeffs[m]:
                del coeffs[m]
        return FieldElement(basis, coeffs)

    @staticmethod
    def sqrt_of_radicand(basis: QuadBasis, radicand: int) -> "FieldElement":
        """The element sqrt(radicand) for a product of basis radicands."""
        s, f = _squarefree_part(radicand)
        rem = s
        mask = 0
        for i, r in enumerate(basis.radicands):
            if rem % r == 0:
                mask |= 1 << i
                rem //= r
        if rem != 1:
            raise ValueError(f"sqrt({radicand}) is not in basis {basis.radicands}")
        return FieldElement(basis, {mask: Fraction(f)})

    @staticmethod
    def zero(basis: QuadBasis) -> "FieldElement":
        return FieldElement(basis, {})

    @staticmethod
    def one(basis: QuadBasis) -> "FieldElement":
        return FieldElement(basis, {0: Fraction(1)})

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> bool:
        return not self.coeffs or (len(self.coeffs) == 1 and 0 in self.coeffs)

    def as_rational(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        if self.is_rational():
            return self.coeffs[0]
        raise ValueError("element is irrational")

    # -- ring operations ---------------------------------------------------

    def _check(self, other: "FieldElement") -> None:
        if self.basis is not other.basis:
            raise ValueError(
                f"basis mismatch: {self.basis.radicands} vs {other.basis.radicands}")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return FieldElement(self.basis, out)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            s = out.get(m)
            if s is None:
                out[m] = -c
            else:
                s = s - c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return FieldElement(self.basis, out)

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.basis, {m: -c for m, c in self.coeffs.items()})

    def __mul__(self, other: Union["FieldElement", Rat]) -> "FieldElement":
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            if not f:
                return FieldElement(self.basis, {})
            return FieldElement(self.basis, {m: c * f for m, c in self.coeffs.items()})
        self._check(other)
        tab = self.basis.mul_table()
        out: dict[int, Fraction] = {}
        for m1, c1 in self.coeffs.items():
            row = tab[m1]
            for m2, c2 in other.coeffs.items():
                m, f = row[m2]
                c = c1 * c2
                if f != 1:
                    c *= f
                s = out.get(m)
                if s is None:
                    out[m] = c
                else:
                    s = s + c
                    if s:
                        out[m] = s
                    else:
                        del out[m]
        return FieldElement(self.basis, out)

    __rmul__ = __mul__

    def conj_mask(self, mask: int) -> "FieldElement":
        """Flip the sign of every term whose subset meets `mask`."""
        return FieldElement(self.basis, {
            m: (-c if (m & mask) and bin(m & mask).count("1") % 2 else c)
            for m, c in self.coeffs.items()})

    def inverse(self) -> "FieldElement":
        if not self.coeffs:
            raise ZeroDivisionError("field element is zero")
        # Rationalize one radicand at a time: multiplying x by its
        # sign-flipped conjugate removes that radicand from the support.
        num = FieldElement.one(self.basis)
        den = self
        for i in range(len(self.basis.radicands)):
            bit = 1 << i
            if any(m & bit for m in den.coeffs):
                conj = den.conj_mask(bit)
                num = num * conj
                den = den * conj
        r = den.as_rational()
        return num * Fraction(1, 1) * Fraction(r.denominator, r.numerator)

    def __truediv__(self, other: Union["FieldElement", Rat]) -> "FieldElement":
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            if not f:
                raise ZeroDivisionError
            return self * Fraction(f.denominator, f.numerator)
        return self * other.inverse()

    def __pow__(self, n: int) -> "FieldElement":
        if n < 0:
            return self.inverse() ** (-n)
        out = FieldElement.one(self.basis)
        b = self
        while n:
            if n & 1:
                out = out * b
            b = b * b
            n >>= 1
        return out

    # -- comparisons -------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldElement):
            if isinstance(other, (int, Fraction)):
                return self.is_rational() and self.as_rational() == other
            return NotImplemented
        if self.basis is not other.basis:
            a, b = unify(self, other)
            return a.coeffs == b.coeffs
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(sorted(self.coeffs.items())))
        return self._hash

    def key(self) -> tuple:
        return tuple(sorted(self.coeffs.items()))

    # -- numeric evaluation ------------------------------------------------

    def __float__(self) -> float:
        if self._float is None:
            b = self.basis
            self._float = float(sum(float(c) * b.radical_value(m)
                                    for m, c in self.coeffs.items()))
        return self._float

    def rational_bounds(self, bits: int = 64) -> tuple[Fraction, Fraction]:
        """Exact rational enclosure [lo, hi] of the value."""
        lo = Fraction(0)
        hi = Fraction(0)
        for m, c in self.coeffs.items():
            rl, rh = Fraction(1), Fraction(1)
            for i, r in enumerate(self.basis.radicands):
                if m >> i & 1:
                    sl, sh = _sqrt_bounds(r, bits)
                    rl, rh = rl * sl, rh * sh
            if c >= 0:
                lo += c * rl
                hi += c * rh
            else:
                lo += c * rh
                hi += c * rl
        return lo, hi

    def sign(self) -> int:
        """Exact sign: 0 iff the canonical form is zero."""
        if not self.coeffs:
            return 0
        if self.is_rational():
            r = self.coeffs[0]
            return -1 if r < 0 else 1
        bits = 64
        while True:
            lo, hi = self.rational_bounds(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            # A nonzero multiquadratic element is bounded away from zero, so
            # this terminates; the syntactic zero test already handled zero.
            bits *= 2
            if bits > 1 << 20:
                raise ArithmeticError("sign refinement exceeded precision cap")

    def compare(self, other: "FieldElement") -> int:
        return (self - other).sign()

    # -- square roots ------------------------------------------------------

    def sqrt(self) -> Optional["FieldElement"]:
        """Exact square root within the field, or None if there is none."""
        sgn = self.sign()
        if sgn < 0:
            return None
        if sgn == 0:
            return FieldElement.zero(self.basis)
        root = _sqrt_in_basis(self, len(self.basis.radicands) - 1)
        if root is not None and root.sign() < 0:
            root = -root
        return root

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "basis": list(self.basis.radicands),
            "coeffs": [
                [list(self.basis.subset_of_mask(m)), f"{c.numerator}/{c.denominator}"]
                for m, c in sorted(self.coeffs.items())
            ],
        }

    @staticmethod
    def from_json(obj: dict) -> "FieldElement":
        basis = QuadBasis(obj["basis"])
        terms = {}
        for subset, cs in obj["coeffs"]:
            num, den = cs.split("/")
            terms[tuple(subset)] = Fraction(int(num), int(den))
        return FieldElement.from_terms(basis, terms)

    def embed(self, basis: QuadBasis) -> "FieldElement":
        """Re-express in a larger basis."""
        if basis is self.basis:
            return self
        if not basis.contains(self.basis):
            raise ValueError(f"{basis} does not contain {self.basis}")
        out = {}
        for m, c in self.coeffs.items():
            out[basis.mask_of_subset(self.basis.subset_of_mask(m))] = c
        return FieldElement(basis, out)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for m, c in sorted(self.coeffs.items()):
            subset = self.basis.subset_of_mask(m)
            rad = "*".join(f"sqrt({r})" for r in subset)
            if rad:
                parts.append(f"{c}*{rad}" if c != 1 else rad)
            else:
                parts.append(str(c))
        return " + ".join(parts)


def _sqrt_in_basis(x: FieldElement, level: int) -> Optional[FieldElement]:
    """Recursive tower square root.

    Treat K_level = K_{level-1}(sqrt(d_level)); write x = a + b*sqrt(d) and
    look for sqrt(x) = u + v*sqrt(d) via u^2 = (a +- sqrt(a^2 - d b^2))/2.
    """
    basis = x.basis
    if level < 0:
        if not x.is_rational():
            return None
        r = x.as_rational()
        if r < 0:
            return None
        sn, fn = _squarefree_part(r.numerator) if r.numerator else (1, 0)
        sd, fd = _squarefree_part(r.denominator)
        # sqrt(p/q) = sqrt(p*q)/q
        s, f = _squarefree_part(r.numerator * r.denominator) if r else (1, 0)
        if not r:
            return FieldElement.zero(basis)
        if s == 1:
            return FieldElement.from_rational(basis, Fraction(f, r.denominator))
        try:
            root = FieldElement.sqrt_of_radicand(basis, s)
        except ValueError:
            return None
        return root * Fraction(f, r.denominator)
    bit = 1 << level
    d = basis.radicands[level]
    a = FieldElement(basis, {m: c for m, c in x.coeffs.items() if not m & bit})
    b = FieldElement(basis, {m ^ bit: c for m, c in x.coeffs.items() if m & bit})
    if b.is_zero():
        r = _sqrt_in_basis(a, level - 1)
        if r is not None:
            return r
        # maybe sqrt(x) = v*sqrt(d) with x = d*v^2
        v2 = a * Fraction(1, d)
        v = _sqrt_in_basis(v2, level - 1)
        if v is not None:
            return v * FieldElement(basis, {bit: Fraction(1)})
        return None
    # n = sqrt(a^2 - d*b^2) must exist in the subfield
    disc = a * a - b * b * d
    n = _sqrt_in_basis(disc, level - 1)
    if n is None:
        return None
    for sign in (1, -1):
        h = (a + n * sign) * Fraction(1, 2)
        u = _sqrt_in_basis(h, level - 1)
        if u is not None and not u.is_zero():
            v = b / (u * 2)
            if any(m & bit for m in v.coeffs):
                continue
            cand = u + v * FieldElement(basis, {bit: Fraction(1)})
            if cand * cand == x:
                return cand
    return None


def unify(x: FieldElement, y: FieldElement) -> tuple[FieldElement, FieldElement]:
    """Embed both elements into the join of their bases."""
    if x.basis is y.basis:
        return x, y
    basis = x.basis.join(y.basis)
    return x.embed(basis), y.embed(basis)


def fe_arith(x: FieldElement, y: FieldElement, op: str) -> FieldElement:
    """Named-operation entry point: op in {add, sub, mul, div}."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown op {op!r}")


def fe_sign(x: FieldElement) -> int:
    return x.sign()


class AlgebraicComplex:
    """A complex number with multiquadratic real and imaginary parts."""

    __slots__ = ("re", "im", "_hash")

    def __init__(self, re: FieldElement, im: FieldElement):
        if re.basis is not im.basis:
            raise ValueError("re/im basis mismatch")
        self.re = re
        self.im = im
        self._hash = None

    @property
    def basis(self) -> QuadBasis:
        return self.re.basis

    @staticmethod
    def zero(basis: QuadBasis) -> "AlgebraicComplex":
        z = FieldElement.zero(basis)
        return AlgebraicComplex(z, z)

    @staticmethod
    def one(basis: QuadBasis) -> "AlgebraicComplex":
        return AlgebraicComplex(FieldElement.one(basis), FieldElement.zero(basis))

    @staticmethod
    def make(basis: QuadBasis, re_terms: dict, im_terms: dict) -> "AlgebraicComplex":
        return AlgebraicComplex(FieldElement.from_terms(basis, re_terms),
                                FieldElement.from_terms(basis, im_terms))

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def __add__(self, other: "AlgebraicComplex") -> "AlgebraicComplex":
        return AlgebraicComplex(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "AlgebraicComplex") -> "AlgebraicComplex":
        return AlgebraicComplex(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "AlgebraicComplex":
        return AlgebraicComplex(-self.re, -self.im)

    def __mul__(self, other: "AlgebraicComplex") -> "AlgebraicComplex":
        re = self.re * other.re - self.im * other.im
        im = self.re * other.im + self.im * other.re
        return AlgebraicComplex(re, im)

    def conj(self) -> "AlgebraicComplex":
        return AlgebraicComplex(self.re, -self.im)

    def norm2(self) -> FieldElement:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "AlgebraicComplex":
        n = self.norm2()
        if n.is_zero():
            raise ZeroDivisionError
        ninv = n.inverse()
        return AlgebraicComplex(self.re * ninv, -self.im * ninv)

    def __truediv__(self, other: "AlgebraicComplex") -> "AlgebraicComplex":
        return self * other.inverse()

    def __pow__(self, n: int) -> "AlgebraicComplex":
        if n < 0:
            return self.inverse() ** (-n)
        out = AlgebraicComplex.one(self.basis)
        b = self
        while n:
            if n & 1:
                out = out * b
            b = b * b
            n >>= 1
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebraicComplex):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.re, self.im))
        return self._hash

    def key(self) -> tuple:
        return (self.re.key(), self.im.key())

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def embed(self, basis: QuadBasis) -> "AlgebraicComplex":
        return AlgebraicComplex(self.re.embed(basis), self.im.embed(basis))

    def to_json(self) -> dict:
        return {"re": self.re.to_json(), "im": self.im.to_json()}

    @staticmethod
    def from_json(obj: dict) -> "AlgebraicComplex":
        return AlgebraicComplex(FieldElement.from_json(obj["re"]),
                                FieldElement.from_json(obj["im"]))

    def __repr__(self) -> str:
        return f"({self.re!r}) + ({self.im!r})i"


def cx_norm2(z: AlgebraicComplex) -> FieldElement:
    return z.norm2()


class AdjoinedElement:
    """a + b*sqrt(radicand) with a, b, radicand in a multiquadratic field.

    One level of quadratic extension over the base field; radicand is
    normalized away (b forced to 0) when it is a perfect square.
    """

    __slots__ = ("a", "b", "radicand")

    def __init__(self, a: FieldElement, b: FieldElement, radicand: FieldElement):
        if not b.is_zero():
            r = radicand.sqrt()
            if r is not None:
                a = a + b * r
                b = FieldElement.zero(a.basis)
                radicand = FieldElement.zero(a.basis)
            elif radicand.sign() < 0:
                raise ValueError("negative radicand in real quadratic extension")
        else:
            radicand = FieldElement.zero(a.basis)
        self.a = a
        self.b = b
        self.radicand = radicand

    @staticmethod
    def from_field(x: FieldElement) -> "AdjoinedElement":
        z = FieldElement.zero(x.basis)
        return AdjoinedElement(x, z, z)

    def is_in_field(self) -> bool:
        return self.b.is_zero()

    def as_field(self) -> FieldElement:
        if not self.is_in_field():
            raise ValueError("element requires the adjoined root")
        return self.a

    def _same_ext(self, other: "AdjoinedElement") -> FieldElement:
        if self.b.is_zero():
            return other.radicand
        if other.b.is_zero():
            return self.radicand
        if self.radicand == other.radicand:
            return self.radicand
        raise ValueError("mixed quadratic extensions")

    def __add__(self, other: "AdjoinedElement") -> "AdjoinedElement":
        rad = self._same_ext(other)
        return AdjoinedElement(self.a + other.a, self.b + other.b, rad)

    def __sub__(self, other: "AdjoinedElement") -> "AdjoinedElement":
        rad = self._same_ext(other)
        return AdjoinedElement(self.a - other.a, self.b - other.b, rad)

    def __neg__(self) -> "AdjoinedElement":
        return AdjoinedElement(-self.a, -self.b, self.radicand)

    def __mul__(self, other: "AdjoinedElement") -> "AdjoinedElement":
        rad = self._same_ext(other)
        a = self.a * other.a + self.b * other.b * rad
        b = self.a * other.b + self.b * other.a
        return AdjoinedElement(a, b, rad)

    def conj_root(self) -> "AdjoinedElement":
        return AdjoinedElement(self.a, -self.b, self.radicand)

    def inverse(self) -> "AdjoinedElement":
        n = self.a * self.a - self.b * self.b * self.radicand
        if n.is_zero():
            raise ZeroDivisionError
        ninv = n.inverse()
        return AdjoinedElement(self.a * ninv, -self.b * ninv, self.radicand)

    def __truediv__(self, other: "AdjoinedElement") -> "AdjoinedElement":
        return self * other.inverse()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AdjoinedElement):
            return NotImplemented
        if self.b.is_zero() and other.b.is_zero():
            return self.a == other.a
        try:
            self._same_ext(other)
        except ValueError:
            return (self - other).sign() == 0 if self.a.basis is other.a.basis else False
        return self.a == other.a and self.b == other.b

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.radicand))

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def sign(self) -> int:
        if self.b.is_zero():
            return self.a.sign()
        if self.a.is_zero():
            return self.b.sign()
        sa, sb = self.a.sign(), self.b.sign()
        if sa == sb:
            return sa
        # sign(a + b sqrt(r)) with a, b of opposite signs: compare a^2, b^2 r
        d = (self.a * self.a - self.b * self.b * self.radicand).sign()
        return sa if d > 0 else sb

    def rational_bounds(self, bits: int = 64) -> tuple[Fraction, Fraction]:
        alo, ahi = self.a.rational_bounds(bits)
        if self.b.is_zero():
            return alo, ahi
        rlo, rhi = self.radicand.rational_bounds(bits)
        rlo = max(rlo, Fraction(0))
        # rational sqrt bounds of the radicand enclosure
        def frac_sqrt_lo(q: Fraction) -> Fraction:
            s = 1 << bits
            return Fraction(math.isqrt(q.numerator * q.denominator * s * s), q.denominator * s)
        def frac_sqrt_hi(q: Fraction) -> Fraction:
            s = 1 << bits
            return Fraction(math.isqrt(q.numerator * q.denominator * s * s) + 1, q.denominator * s)
        slo, shi = frac_sqrt_lo(rlo), frac_sqrt_hi(rhi)
        blo, bhi = self.b.rational_bounds(bits)
        cands = [blo * slo, blo * shi, bhi * slo, bhi * shi]
        return alo + min(cands), ahi + max(cands)

    def __float__(self) -> float:
        v = float(self.a)
        if not self.b.is_zero():
            v += float(self.b) * math.sqrt(float(self.radicand))
        return v

    def __repr__(self) -> str:
        if self.b.is_zero():
            return repr(self.a)
        return f"({self.a!r}) + ({self.b!r})*sqrt({self.radicand!r})"


def adjoin_solve_quadratic(p: FieldElement, q: FieldElement) -> list[AdjoinedElement]:
    """Real roots of t^2 + p*t + q = 0 over the field, exactly.

    Roots are (-p +- sqrt(p^2 - 4q)) / 2; the discriminant root is adjoined
    when it is not a square in the field.  Negative discriminant gives [].
    """
    basis = p.basis
    disc = p * p - q * 4
    s = disc.sign()
    half = Fraction(1, 2)
    if s < 0:
        return []
    if s == 0:
        return [AdjoinedElement.from_field(-p * half)]
    r = disc.sqrt()
    if r is not None:
        return [AdjoinedElement.from_field((-p + r) * half),
                AdjoinedElement.from_field((-p - r) * half)]
    zero = FieldElement.zero(basis)
    a = -p * half
    b = FieldElement.from_rational(basis, half)
    return [AdjoinedElement(a, b, disc), AdjoinedElement(a, -b, disc)]


def try_absorb_radicand(disc: FieldElement) -> Optional[tuple[QuadBasis, FieldElement]]:
    """Try to express sqrt(disc) in an extension of disc's basis.

    Handles the common case disc = rational * (field square): returns the
    extended basis and sqrt(disc) expressed there, or None.
    """
    basis = disc.basis
    root = disc.sqrt()
    if root is not None:
        return basis, root
    # candidate square-free integers from the rational content
    cands: set[int] = set()
    for c in disc.coeffs.values():
        for n in (abs(c.numerator), c.denominator):
            if n:
                s, _ = _squarefree_part(n)
                if s > 1:
                    cands.add(s)
    for m in disc.coeffs:
        for r in basis.subset_of_mask(m):
            cands.add(r)
    extra = set()
    for a in cands:
        for b in cands:
            if a < b and math.gcd(a, b) == 1:
                extra.add(a * b)
    for q in sorted(cands | extra):
        new_rads = []
        ok = True
        rem = q
        for r in basis.radicands:
            g = math.gcd(rem, r)
            if g == r:
                rem //= r
            elif g != 1:
                ok = False
                break
        if not ok or rem == 1 and q in [math.prod(s) for s in [basis.radicands]]:
            continue
        try:
            if rem == 1:
                ext = basis
            elif len(basis.radicands) >= _MAX_RADICANDS:
                continue
            else:
                ext = basis.extend(rem)
        except ValueError:
            continue
        root = disc.embed(ext).sqrt()
        if root is not None:
            return ext, root
    return None


def json_dumps_fe(x: FieldElement) -> str:
    return json.dumps(x.to_json(), separators=(",", ":"))
