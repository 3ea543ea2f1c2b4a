"""Divisor power sums, abundancy indices, and the exact surd values they take.

A divisor sum over a quadratic ring adds terms sqrt(norm)**n, so its value is
a finite rational combination of square roots of squarefree integers.  The
SurdSum type keeps those combinations exact; by linear independence of
distinct square roots over the rationals, structural equality after
normalization is value equality, which is what makes "the index equals t"
a decidable, exact predicate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .factorize import ElementFactorization, factor_element
from .ring import QuadInt, RingCtx
from .splitting import factor_integer

#: Exponent cap for the public divisor-sum API; keeps term growth tame.
MAX_POWER = 64

_RationalLike = int | Fraction


class SurdSum:
    """An exact finite sum of c_r * sqrt(r) over distinct squarefree r >= 1.

    Radicals are squarefree positive integers, coefficients nonzero rationals;
    the rational part is the radical-1 term and the empty sum is zero.
    Instances are immutable.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, _RationalLike] | None = None) -> None:
        clean: dict[int, Fraction] = {}
        for r, c in (terms or {}).items():
            if r < 1 or _squarefree_split(r) != (1, r):
                raise ValueError(f"radical {r} is not a squarefree positive integer")
            c = Fraction(c)
            if c:
                clean[r] = c
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("SurdSum is immutable")

    @classmethod
    def _raw(cls, terms: dict[int, Fraction]) -> SurdSum:
        self = object.__new__(cls)
        object.__setattr__(self, "_terms", terms)
        return self

    @classmethod
    def from_rational(cls, q: _RationalLike) -> SurdSum:
        q = Fraction(q)
        return cls._raw({1: q} if q else {})

    @classmethod
    def sqrt_int(cls, m: int, scale: _RationalLike = 1) -> SurdSum:
        """scale * sqrt(m) for a positive integer m, radical reduced to squarefree."""
        if m < 1:
            raise ValueError("sqrt_int wants a positive integer")
        square, rad = _squarefree_split(m)
        c = Fraction(scale) * square
        return cls._raw({rad: c} if c else {})

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = SurdSum.from_rational(other)
        if isinstance(other, SurdSum):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: SurdSum | _RationalLike) -> SurdSum:
        if isinstance(other, (int, Fraction)):
            other = SurdSum.from_rational(other)
        out = dict(self._terms)
        for r, c in other._terms.items():
            s = out.get(r, 0) + c
            if s:
                out[r] = s
            else:
                out.pop(r, None)
        return SurdSum._raw(out)

    __radd__ = __add__

    def __neg__(self) -> SurdSum:
        return SurdSum._raw({r: -c for r, c in self._terms.items()})

    def __sub__(self, other: SurdSum | _RationalLike) -> SurdSum:
        if isinstance(other, (int, Fraction)):
            other = SurdSum.from_rational(other)
        return self + (-other)

    def __mul__(self, other: SurdSum | _RationalLike) -> SurdSum:
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if not other:
                return SurdSum._raw({})
            return SurdSum._raw({r: c * other for r, c in self._terms.items()})
        out: dict[int, Fraction] = {}
        for r1, c1 in self._terms.items():
            for r2, c2 in other._terms.items():
                g = math.gcd(r1, r2)
                rad = (r1 // g) * (r2 // g)
                c = c1 * c2 * g
                s = out.get(rad, 0) + c
                if s:
                    out[rad] = s
                else:
                    out.pop(rad, None)
        return SurdSum._raw(out)

    __rmul__ = __mul__

    def is_rational(self) -> bool:
        return set(self._terms) <= {1}

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self._terms.get(1, Fraction(0))

    def __float__(self) -> float:
        return math.fsum(float(c) * math.sqrt(r) for r, c in self._terms.items())

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        bits: list[str] = []
        for r in sorted(self._terms):
            c = self._terms[r]
            if r == 1:
                body = str(c)
            elif c == 1:
                body = f"sqrt({r})"
            elif c == -1:
                body = f"-sqrt({r})"
            else:
                body = f"{c}*sqrt({r})"
            if not bits:
                bits.append(body)
            elif body.startswith("-"):
                bits.append(f"- {body[1:]}")
            else:
                bits.append(f"+ {body}")
        return " ".join(bits)

    def __repr__(self) -> str:
        return f"SurdSum({self._terms!r})"


def _squarefree_split(m: int) -> tuple[int, int]:
    """m = square**2 * radical with radical squarefree."""
    square = radical = 1
    for p, e in factor_integer(m).factors:
        square *= p ** (e // 2)
        if e & 1:
            radical *= p
    return square, radical


@dataclass(frozen=True)
class Index:
    """The exact abundancy index delta_n(z) / |z|**n of one element."""

    value: SurdSum
    n: int
    z_norm: int


def _abs_power(norm_pi: int, m: int) -> SurdSum:
    """|pi|**m = sqrt(norm_pi)**m as an exact surd (norm_pi prime or a prime square)."""
    s = math.isqrt(norm_pi)
    if s * s == norm_pi:
        return SurdSum.from_rational(Fraction(s) ** m)
    k, odd = divmod(m, 2)
    c = Fraction(norm_pi) ** k
    return SurdSum.sqrt_int(norm_pi, c) if odd else SurdSum.from_rational(c)


def _check_power(n: int) -> None:
    if abs(n) > MAX_POWER:
        raise ValueError(f"|n| must be at most {MAX_POWER}")


def _delta_from_parts(f: ElementFactorization, n: int) -> SurdSum:
    total = SurdSum.from_rational(1)
    for pi, e in f.parts:
        npi = pi.norm()
        chain = SurdSum.from_rational(0)
        for j in range(e + 1):
            chain = chain + _abs_power(npi, j * n)
        total = total * chain
    return total


def delta_n(ctx: RingCtx, z: QuadInt, n: int) -> SurdSum:
    """Sum of |x|**n over the divisors x of z, one divisor per associate class.

    Computed multiplicatively over the prime factorization; n may be any
    integer with |n| <= 64 (negative powers give rational-coefficient surds).
    """
    _check_power(n)
    return _delta_from_parts(factor_element(ctx, z), n)


def index_n(ctx: RingCtx, z: QuadInt, n: int) -> Index:
    """The exact index delta_n(z)/|z|**n; odd n is rationalized through sqrt(norm)."""
    if n < 1:
        raise ValueError("the index is defined for positive n")
    _check_power(n)
    f = factor_element(ctx, z)
    nz = z.norm()
    dsum = _delta_from_parts(f, n)
    if n % 2 == 0:
        value = dsum * Fraction(1, nz ** (n // 2))
    else:
        value = dsum * SurdSum.sqrt_int(nz, Fraction(1, nz ** ((n + 1) // 2)))
    return Index(value=value, n=n, z_norm=nz)


def is_n_powerfully_t_perfect(ctx: RingCtx, z: QuadInt, n: int, t: int) -> bool:
    """Exact test: does the n-th index of z equal the integer t (t >= 2)?"""
    if t < 2:
        raise ValueError("t must be an integer >= 2")
    return index_n(ctx, z, n).value == SurdSum.from_rational(t)


def classical_sigma(n: int, k: int) -> int | Fraction:
    """Sum of c**k over the positive divisors c of n (k = 0 counts divisors).

    Integer for k >= 0, Fraction for negative k.
    """
    if n < 1:
        raise ValueError("classical_sigma wants a positive integer")
    if k == 0:
        out = 1
        for _, e in factor_integer(n).factors:
            out *= e + 1
        return out
    if k > 0:
        out = 1
        for p, e in factor_integer(n).factors:
            out *= (p ** (k * (e + 1)) - 1) // (p**k - 1)
        return out
    out = Fraction(1)
    for p, e in factor_integer(n).factors:
        pk = Fraction(p) ** k
        out *= (pk ** (e + 1) - 1) / (pk - 1)
    return out


def classical_abundancy(n: int) -> Fraction:
    """sigma_1(n) / n, the ordinary abundancy index over the positive integers."""
    return Fraction(classical_sigma(n, 1), n)
