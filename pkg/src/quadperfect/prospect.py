"""Searches for perfect elements, bounded theorem corroboration, and congruence checks.

Searching for elements whose first index equals t runs two independent
routes: an integer reduction (enumerate integers r with r*r <= bound whose
ordinary abundancy is t and whose prime factors are all inert) and, for desk
bounds, a direct scan of every canonical element.  The two hit sets must
agree; their agreement is recorded on the report.

Direct scans shard the norm range, run shards across processes (capped by the
QP_WORKERS environment variable), and can checkpoint completed shards to a
newline-delimited file so interrupted scans resume.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

from .abundancy import (
    classical_sigma,
    index_n,
    is_n_powerfully_t_perfect,
)
from .elemtext import parse_element
from .ring import QuadInt, RingCtx, ring
from .scan import InternalInconsistency, scan_shard_task
from .splitting import (
    SplitClass,
    classify_prime,
    factor_integer,
    is_probable_prime,
    primes_up_to,
)

#: Largest bound at which a search for t-perfect elements cross-checks itself
#: with a direct scan.
CROSS_CHECK_LIMIT = 10**8

_MERSENNE_EXP_LIMIT = 127


def worker_count(requested: int | None = None) -> int:
    """Parallel shard cap: explicit argument, else QP_WORKERS, else the CPU count."""
    if requested is not None:
        if requested < 1:
            raise ValueError("worker count must be positive")
        return requested
    env = os.environ.get("QP_WORKERS")
    if env:
        value = int(env)
        if value < 1:
            raise ValueError("QP_WORKERS must be a positive integer")
        return value
    return os.cpu_count() or 1


@dataclass(frozen=True)
class SearchReport:
    """Outcome of one search: parameters, canonical hits, method, cross-check state."""

    d: int
    n: int
    t: int
    bound: int
    hits: tuple[QuadInt, ...]
    method: str
    cross_checked: bool | None = None


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[Check, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> tuple[Check, ...]:
        return tuple(c for c in self.checks if not c.passed)


def _sort_hits(hits) -> tuple[QuadInt, ...]:
    return tuple(sorted(hits, key=lambda z: (z.norm(), z.x, z.y)))


# ---------------------------------------------------------------------------
# Checkpointing: one line per completed shard, "key=value" fields separated by
# spaces, hits inside a field as semicolon-joined canonical element strings.
# ---------------------------------------------------------------------------


def format_checkpoint_line(d: int, n: int, t: int, lo: int, hi: int, hits) -> str:
    body = ";".join(str(z) for z in hits)
    return f"d={d} n={n} t={t} norm_lo={lo} norm_hi={hi} hits={body}"


def parse_checkpoint_line(line: str) -> dict:
    fields = {}
    for chunk in line.strip().split():
        key, _, value = chunk.partition("=")
        fields[key] = value
    out = {k: int(fields[k]) for k in ("d", "n", "t", "norm_lo", "norm_hi")}
    out["hits"] = [parse_element(out["d"], s) for s in fields["hits"].split(";") if s]
    return out


def _load_checkpoint(path: str, d: int, n: int, t: int, bound: int):
    done: list[tuple[int, int]] = []
    hits: list[QuadInt] = []
    if not os.path.exists(path):
        return done, hits
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = parse_checkpoint_line(line)
            if (rec["d"], rec["n"], rec["t"]) != (d, n, t):
                continue
            lo, hi = rec["norm_lo"], rec["norm_hi"]
            if lo < 1 or hi > bound + 1 or lo >= hi:
                continue
            done.append((lo, hi))
            hits.extend(rec["hits"])
    return done, hits


def _gaps(bound: int, done: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Subintervals of [1, bound+1) not covered by the completed shards."""
    out = []
    cursor = 1
    for lo, hi in sorted(done):
        if lo > cursor:
            out.append((cursor, min(lo, bound + 1)))
        cursor = max(cursor, hi)
        if cursor > bound:
            break
    if cursor <= bound:
        out.append((cursor, bound + 1))
    return [(lo, hi) for lo, hi in out if lo < hi]


def _shards(ranges: list[tuple[int, int]], width: int) -> list[tuple[int, int]]:
    out = []
    for lo, hi in ranges:
        cur = lo
        while cur < hi:
            out.append((cur, min(cur + width, hi)))
            cur += width
    return out


_scan_memo: dict[tuple[int, int, int], list[tuple[int, int, int]]] = {}


def direct_scan(
    d: int,
    n: int,
    t: int,
    bound: int,
    *,
    workers: int | None = None,
    checkpoint: str | None = None,
) -> list[QuadInt]:
    """Every canonical element with norm <= bound and n-index exactly t."""
    ring(d)
    if bound < 1:
        raise ValueError("bound must be at least 1")
    if t < 2:
        raise ValueError("t must be an integer >= 2")
    nworkers = worker_count(workers)
    memo_key = (d, n, bound)
    if checkpoint is None and memo_key in _scan_memo:
        return [
            QuadInt._raw(d, x, y) for x, y, tt in _scan_memo[memo_key] if tt == t
        ]

    done: list[tuple[int, int]] = []
    known: list[QuadInt] = []
    if checkpoint is not None:
        done, known = _load_checkpoint(checkpoint, d, n, t, bound)
    width = max(min(bound // max(1, 4 * nworkers) + 1, 1_000_000), 1 << 15)
    shards = _shards(_gaps(bound, done), width)

    raw: list[tuple[int, int, int]] = []
    tasks = [(d, n, lo, hi, None) for lo, hi in shards]

    def consume(lo: int, hi: int, shard_hits: list[tuple[int, int, int]]) -> None:
        raw.extend(shard_hits)
        if checkpoint is not None:
            line = format_checkpoint_line(
                d, n, t, lo, hi, [QuadInt._raw(d, x, y) for x, y, tt in shard_hits if tt == t]
            )
            with open(checkpoint, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")

    if nworkers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=nworkers) as pool:
            for lo, hi, shard_hits in pool.map(scan_shard_task, tasks):
                consume(lo, hi, shard_hits)
    else:
        for task in tasks:
            lo, hi, shard_hits = scan_shard_task(task)
            consume(lo, hi, shard_hits)

    if checkpoint is None:
        if len(_scan_memo) > 32:
            _scan_memo.clear()
        _scan_memo[memo_key] = raw
    hits = {QuadInt._raw(d, x, y) for x, y, tt in raw if tt == t}
    hits.update(known)
    return list(_sort_hits(hits))


def search_t_perfect(
    ctx: RingCtx,
    t: int,
    bound: int,
    *,
    workers: int | None = None,
    checkpoint: str | None = None,
) -> SearchReport:
    """Find elements of index t by integer reduction, cross-checked by direct scan.

    The reduction enumerates integers r with r*r <= bound, keeps those whose
    ordinary abundancy index is t and whose prime factors are all inert, and
    embeds them.  For bounds up to 10**8 the direct scan runs too and the
    report records whether the hit sets agree.
    """
    if t < 2:
        raise ValueError("t must be an integer >= 2")
    if bound < 1:
        raise ValueError("bound must be at least 1")
    hits = []
    for r in range(1, math.isqrt(bound) + 1):
        if classical_sigma(r, 1) != t * r:
            continue
        if all(
            classify_prime(ctx, p) is SplitClass.INERT
            for p, _ in factor_integer(r).factors
        ):
            hits.append(QuadInt.from_int(ctx.d, r))
    cross = None
    if bound <= CROSS_CHECK_LIMIT:
        scanned = direct_scan(
            ctx.d, 1, t, bound, workers=workers, checkpoint=checkpoint
        )
        cross = set(scanned) == set(hits)
    return SearchReport(
        d=ctx.d,
        n=1,
        t=t,
        bound=bound,
        hits=_sort_hits(hits),
        method="IntegerReduction",
        cross_checked=cross,
    )


def search_powerfully(
    ctx: RingCtx,
    n: int,
    t: int,
    bound: int,
    *,
    workers: int | None = None,
    checkpoint: str | None = None,
) -> SearchReport:
    """Direct scan for elements with n-index exactly t.

    For n >= 3 a nonempty result contradicts the bound I_n < 2 on rational
    indices, so any hit is raised as an InternalInconsistency rather than
    returned as data.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    hits = direct_scan(ctx.d, n, t, bound, workers=workers, checkpoint=checkpoint)
    if n >= 3 and hits:
        raise InternalInconsistency(
            f"scan produced {len(hits)} hits for n={n}, t={t}, d={ctx.d}; "
            "indices that large cannot be integers"
        )
    return SearchReport(
        d=ctx.d,
        n=n,
        t=t,
        bound=bound,
        hits=_sort_hits(hits),
        method="DirectScan",
        cross_checked=None,
    )


def mersenne_perfects(ctx: RingCtx, p_max: int) -> SearchReport:
    """Even perfect integers 2**(p-1) * (2**p - 1), p <= p_max, that stay perfect here.

    A candidate survives exactly when both 2 and its Mersenne prime are inert;
    every survivor is certified by the exact index test before being reported.
    """
    if p_max > _MERSENNE_EXP_LIMIT:
        raise ValueError(f"p_max is capped at {_MERSENNE_EXP_LIMIT}")
    hits = []
    two_inert = classify_prime(ctx, 2) is SplitClass.INERT
    for p in primes_up_to(max(p_max, 2)):
        if p > p_max:
            break
        m = (1 << p) - 1
        if not is_probable_prime(m):
            continue
        if not two_inert or classify_prime(ctx, m) is not SplitClass.INERT:
            continue
        r = (1 << (p - 1)) * m
        z = QuadInt.from_int(ctx.d, r)
        if not is_n_powerfully_t_perfect(ctx, z, 1, 2):
            raise InternalInconsistency(f"{r} passed the Mersenne filter but I_1 != 2")
        hits.append(z)
    top = (1 << (p_max - 1)) * ((1 << p_max) - 1) if p_max >= 2 else 1
    return SearchReport(
        d=ctx.d,
        n=1,
        t=2,
        bound=top * top,
        hits=_sort_hits(hits),
        method="MersenneFilter",
        cross_checked=None,
    )


# ---------------------------------------------------------------------------
# Analytic bound checks.
# ---------------------------------------------------------------------------


def zeta_series(s: float, terms: int = 5000) -> float:
    """Riemann zeta by direct summation plus an integral tail estimate.

    The tail below the cut K is K**(1-s)/(s-1) - K**(-s)/2 + s*K**(-s-1)/12
    with error under s*(s+1)*(s+2)*K**(-s-3)/720, far below 1e-10 for every
    s >= 1.3 at the default cut.
    """
    if s <= 1:
        raise ValueError("the series needs s > 1")
    partial = math.fsum(k**-s for k in range(1, terms + 1))
    tail = (
        terms ** (1.0 - s) / (s - 1.0)
        - 0.5 * terms**-s
        + s * terms ** (-s - 1.0) / 12.0
    )
    return partial + tail


def verify_bounds(n: int, samples) -> VerificationReport:
    """Check float(I_n(z)) < zeta(n/2)**2 on the samples, plus the fixed constants.

    The constants: zeta(5/2)**2 lies in (1.79, 1.81), and pi**4/60, pi**4/52,
    4*pi**4/195 are each below 2.
    """
    if n < 3:
        raise ValueError("the zeta-square bound needs n >= 3")
    checks = []
    z2 = zeta_series(n / 2) ** 2
    for ctx, z in samples:
        val = float(index_n(ctx, z, n).value)
        checks.append(
            Check(
                name=f"I_{n}({z}) < zeta({n}/2)^2 in d={ctx.d}",
                passed=val < z2,
                detail=f"{val:.10f} < {z2:.10f}",
            )
        )
    z52 = zeta_series(2.5) ** 2
    pi4 = math.pi**4
    checks.append(
        Check("zeta(5/2)^2 in (1.79, 1.81)", 1.79 < z52 < 1.81, f"{z52:.10f}")
    )
    for label, value in (
        ("pi^4/60", pi4 / 60),
        ("pi^4/52", pi4 / 52),
        ("4*pi^4/195", 4 * pi4 / 195),
    ):
        checks.append(Check(f"{label} < 2", value < 2, f"{value:.10f}"))
    return VerificationReport(tuple(checks))


def inert_residues(ctx: RingCtx, modulus: int, scan_limit: int = 10**5) -> frozenset[int]:
    """Residue classes mod modulus whose primes are all inert, found empirically.

    Every prime below scan_limit is classified and bucketed by residue.  If a
    class mixes inert with non-inert primes the modulus cannot characterize
    inertness and a ValueError says so.
    """
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    inert_seen: dict[int, bool] = {}
    other_seen: dict[int, bool] = {}
    for p in primes_up_to(scan_limit):
        r = p % modulus
        if classify_prime(ctx, p) is SplitClass.INERT:
            inert_seen[r] = True
        else:
            other_seen[r] = True
    mixed = sorted(set(inert_seen) & set(other_seen))
    if mixed:
        raise ValueError(
            f"modulus {modulus} does not separate inert primes for d={ctx.d}: "
            f"classes {mixed} contain both kinds"
        )
    return frozenset(inert_seen)


# ---------------------------------------------------------------------------
# The mod-8 congruence identities and the parity predictor for the
# square-part shape of a hypothetical odd perfect integer (d = -2 analysis).
# ---------------------------------------------------------------------------


class LParity(Enum):
    ODD_L = "odd"
    EVEN_L = "even"
    UNCONSTRAINED = "unconstrained"


@dataclass(frozen=True)
class EulerianShape:
    """The shape p**k * (m1*m2)**2 of a hypothetical odd perfect integer.

    p is the special prime, k its exponent (both 1 mod 4); m1 collects the
    square-part primes that are 5 mod 8 (only their exponents matter here)
    and m2_part the squarefree-free remainder built from primes 7 mod 8.
    """

    p: int
    k: int
    m1_exponents: tuple[int, ...]
    m2_part: int

    def __post_init__(self):
        if not is_probable_prime(self.p) or self.p % 4 != 1:
            raise ValueError("p must be a prime congruent to 1 mod 4")
        if self.k < 1 or self.k % 4 != 1:
            raise ValueError("k must be a positive integer congruent to 1 mod 4")
        if any(a < 1 for a in self.m1_exponents):
            raise ValueError("m1 exponents must be positive")
        if self.m2_part < 1:
            raise ValueError("m2_part must be positive")
        for q, _ in factor_integer(self.m2_part).factors:
            if q % 8 != 7:
                raise ValueError(f"m2 prime {q} is not 7 mod 8")

    @property
    def L(self) -> int:
        return sum(1 for a in self.m1_exponents if a & 1)


def eulerian_parity(shape: EulerianShape) -> LParity:
    """Parity forced on L (the count of odd square-part exponents) by k mod 8."""
    k8 = shape.k % 8
    if k8 == 1:
        return LParity.ODD_L
    if k8 == 5:
        return LParity.EVEN_L
    return LParity.UNCONSTRAINED


def congruence_identities() -> VerificationReport:
    """The mod-8 identities behind the parity predictor, checked exhaustively.

    (i)   sigma(q**(2a)) = 6a+1 (mod 8) for primes q = 5 (mod 8), q < 1000, a <= 20;
    (ii)  sum(p**l, l=0..k) = 6 (mod 8) when k = 1 (mod 8) and 2 (mod 8) when
          k = 5 (mod 8), for primes p = 5 (mod 8), p < 1000, k < 100;
    (iii) sigma(q**(2a)) = 1 (mod 8) for primes q = 7 (mod 8), q < 1000, a <= 20;
    (iv)  2**p - 1 is never 2, 8, or 10 mod 11 for primes p < 1000.
    """
    checks = []

    def sigma_mod8(q: int, e: int) -> int:
        return sum(pow(q, l, 8) for l in range(e + 1)) % 8

    bad = [
        (q, a)
        for q in primes_up_to(999)
        if q % 8 == 5
        for a in range(1, 21)
        if sigma_mod8(q, 2 * a) != (6 * a + 1) % 8
    ]
    checks.append(
        Check(
            "sigma(q^2a) = 6a+1 mod 8 for q = 5 mod 8",
            not bad,
            f"{len(bad)} counterexamples",
        )
    )

    bad = [
        (p, k)
        for p in primes_up_to(999)
        if p % 8 == 5
        for k in range(1, 100)
        if k % 8 in (1, 5)
        and sigma_mod8(p, k) != (6 if k % 8 == 1 else 2)
    ]
    checks.append(
        Check(
            "sum p^l mod 8 is 6 for k=1 mod 8 and 2 for k=5 mod 8",
            not bad,
            f"{len(bad)} counterexamples",
        )
    )

    bad = [
        (q, a)
        for q in primes_up_to(999)
        if q % 8 == 7
        for a in range(1, 21)
        if sigma_mod8(q, 2 * a) != 1
    ]
    checks.append(
        Check(
            "sigma(q^2a) = 1 mod 8 for q = 7 mod 8",
            not bad,
            f"{len(bad)} counterexamples",
        )
    )

    bad = [
        p
        for p in primes_up_to(999)
        if ((1 << p) - 1) % 11 in (2, 8, 10)
    ]
    checks.append(
        Check(
            "2^p - 1 mod 11 avoids {2, 8, 10} for prime p",
            not bad,
            f"{len(bad)} counterexamples",
        )
    )
    return VerificationReport(tuple(checks))
