"""How integer primes behave in each ring, plus the rational-integer factorizer.

An odd prime p ramifies exactly when p divides d, splits when d is a quadratic
residue mod p, and is inert otherwise; p = 2 follows a fixed table (ramified
for d in {-1, -2}, split for d = -7, inert for the rest).  Non-inert primes
carry a degree-one prime element above them, constructed by Cornacchia's
algorithm seeded with a Tonelli-Shanks square root.
"""

from __future__ import annotations

import math
import random
from enum import Enum
from functools import cache, lru_cache
from typing import NamedTuple

from .ring import QuadInt, RingCtx, canonicalize, ring

_TRIAL_LIMIT = 10**6
_rng = random.Random(0x51B0)


class SplitClass(Enum):
    INERT = "inert"
    RAMIFIED = "ramified"
    SPLIT = "split"


class IntegerFactorization(NamedTuple):
    """A complete prime factorization of n, primes strictly increasing."""

    n: int
    factors: tuple[tuple[int, int], ...]


@cache
def primes_up_to(limit: int) -> tuple[int, ...]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    return tuple(i for i in range(limit + 1) if sieve[i])


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin: deterministic witness set below 2**64, 40 random rounds above."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = ((d & -d).bit_length()) - 1
    d >>= s
    if n < 1 << 64:
        witnesses = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    else:
        witnesses = tuple(_rng.randrange(2, n - 1) for _ in range(40))
    for a in witnesses:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int) -> int:
    """A nontrivial factor of odd composite n (Brent's cycle variant)."""
    rng = random.Random(n)
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


@lru_cache(maxsize=1 << 16)
def factor_integer(n: int) -> IntegerFactorization:
    """Factor n >= 1: trial division through 10**6, then Brent rho on survivors."""
    if n < 1:
        raise ValueError("factor_integer wants a positive integer")
    found: dict[int, int] = {}
    rem = n
    for p in primes_up_to(_TRIAL_LIMIT):
        if p * p > rem:
            break
        if rem % p == 0:
            e = 0
            while rem % p == 0:
                rem //= p
                e += 1
            found[p] = e
            # Cheap early exit once the cofactor is certified prime.
            if rem > 1 and p > 256 and is_probable_prime(rem):
                found[rem] = found.get(rem, 0) + 1
                rem = 1
                break
    if rem > 1:
        stack = [rem]
        while stack:
            m = stack.pop()
            if is_probable_prime(m):
                found[m] = found.get(m, 0) + 1
                continue
            f = _brent_rho(m)
            stack += [f, m // f]
    return IntegerFactorization(n, tuple(sorted(found.items())))


@lru_cache(maxsize=None)
def _classify(d: int, p: int) -> SplitClass:
    if p == 2:
        if d in (-1, -2):
            return SplitClass.RAMIFIED
        return SplitClass.SPLIT if d == -7 else SplitClass.INERT
    if d % p == 0:
        return SplitClass.RAMIFIED
    # Euler's criterion: d is a QR mod p exactly when d^((p-1)/2) = 1.
    return SplitClass.SPLIT if pow(d % p, (p - 1) // 2, p) == 1 else SplitClass.INERT


def classify_prime(ctx: RingCtx, p: int) -> SplitClass:
    """Inert, ramified, or split behavior of the integer prime p in the ring."""
    if p < 2 or not is_probable_prime(p):
        raise ValueError(f"{p} is not an integer prime")
    return _classify(ctx.d, p)


def sqrt_mod(a: int, p: int) -> int | None:
    """Tonelli-Shanks: the root r of r*r = a (mod p) with 0 <= r <= (p-1)//2.

    Returns None when a is a quadratic nonresidue; p must be an odd prime.
    """
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
        return min(r, p - r)
    q = p - 1
    s = 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i = 1
        t2i = t * t % p
        while t2i != 1:
            t2i = t2i * t2i % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        r = r * b % p
        c = b * b % p
        t = t * c % p
        m = i
    return min(r, p - r)


def _cornacchia(D: int, p: int, r: int) -> tuple[int, int] | None:
    """Descend the Euclid chain from (p, r) toward a solution of a*a + D*b*b = p."""
    a, b = p, r
    limit = math.isqrt(p)
    while b > limit:
        a, b = b, a % b
    c, rem = divmod(p - b * b, D)
    if rem:
        return None
    t = math.isqrt(c)
    if t * t != c:
        return None
    return b, t


def prime_above(ctx: RingCtx, p: int) -> QuadInt:
    """The canonical prime element of norm p over a ramified or split prime p.

    Split odd primes go through Cornacchia: a*a + |d|*b*b = p in integer
    coordinates when d = 2, 3 (mod 4), or x*x + |d|*y*y = 4p in half
    coordinates when d = 1 (mod 4) (seed parity forces the odd square root).
    Inert primes are rejected: no element has norm p there.
    """
    cls = classify_prime(ctx, p)
    if cls is SplitClass.INERT:
        raise ValueError(f"{p} is inert for d={ctx.d}: no element of norm {p} exists")
    return _prime_above(ctx.d, p)


@lru_cache(maxsize=None)
def _prime_above(d: int, p: int) -> QuadInt:
    if p == 2:
        cand = {
            -1: QuadInt(-1, 1, 1),
            -2: QuadInt(-2, 0, 1),
            -7: QuadInt(-7, 1, 1, half=True),
        }[d]
        return canonicalize(cand)[1]
    if d % p == 0:
        # Odd ramified p equals |d| (each |d| here is 1, 2, or prime).
        return canonicalize(QuadInt(d, 0, 1))[1]
    root = sqrt_mod(d, p)
    assert root is not None, f"split prime {p} has no root of {d}"
    if d % 4 == 1:
        # Solve x^2 + |d|y^2 = 4p over the parity-locked half coordinates:
        # lift the seed to the odd root, run the chain from (2p, seed).
        x0 = root if root & 1 else p - root
        a, b = 2 * p, x0
        limit = math.isqrt(4 * p)
        while b > limit:
            a, b = b, a % b
        c, rem = divmod(4 * p - b * b, -d)
        t = math.isqrt(c) if not rem else -1
        assert rem == 0 and t * t == c, f"no norm-{p} element for d={d}"
        cand = QuadInt(d, b, t, half=True)
    else:
        sol = _cornacchia(-d, p, root) or _cornacchia(-d, p, p - root)
        assert sol is not None, f"no norm-{p} element for d={d}"
        cand = QuadInt(d, sol[0], sol[1])
    return canonicalize(cand)[1]
