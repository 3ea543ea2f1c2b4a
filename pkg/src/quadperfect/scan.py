"""Norm-bounded enumeration of canonical elements with exact integer-index detection.

A shard covers a norm interval [lo, hi).  Candidate coordinates come from the
box |x| <= 2*sqrt(hi), |y| <= 2*sqrt(hi/|d|) filtered by the sector rules, so
each canonical element in the interval is produced exactly once.  The interval
is factored wholesale with a segmented sieve, and each distinct norm is boiled
down to a recipe: a rational divisor-chain factor, plus one (A + B*sqrt(p))
factor per prime whose elements sit above p with absolute value sqrt(p).  The
recipe decides, exactly and per element, whether the n-index is an integer.

Two audits run inside every shard: an inert prime must never carry an odd
norm exponent, and the number of enumerated elements per norm must equal the
product of (split exponent + 1).  Either failure aborts the scan.
"""

from __future__ import annotations

import math
from functools import cache
from itertools import product as iproduct

import numpy as np

from .ring import QuadInt, ring, try_div
from .splitting import SplitClass, _classify, prime_above, primes_up_to


class InternalInconsistency(RuntimeError):
    """An exact invariant failed; the scan (or a theorem check) found a bug."""


@cache
def _chain(p: int, k: int, n: int) -> tuple[int, int]:
    """Sum of sqrt(p)**(j*n) for j = 0..k, returned as A + B*sqrt(p)."""
    A = B = 0
    for j in range(k + 1):
        m = j * n
        if m & 1:
            B += p ** ((m - 1) >> 1)
        else:
            A += p ** (m >> 1)
    return A, B


@cache
def _chain_rat(q: int, k: int, n: int) -> int:
    return sum(q ** (j * n) for j in range(k + 1))


@cache
def _split_pair(p: int, a: int, b: int, n: int) -> tuple[int, int]:
    """Chain product for exponents (a, b) on the two primes above a split p."""
    A1, B1 = _chain(p, a, n)
    A2, B2 = _chain(p, b, n)
    return A1 * A2 + p * B1 * B2, A1 * B2 + A2 * B1


def _build_contrib(d: int, p: int, e: int, n: int):
    """Recipe entry for prime p with norm exponent e.

    Returns (kind, payload, odd_e, p**(e//2), count_multiplier):
    kind 0 is a plain rational multiplier, kind 1 a single surd factor
    (A, B) on radical p, kind 2 a list of per-min-exponent alternatives for a
    split prime with e >= 2 (those need per-element resolution).
    """
    # p comes from the sieve, so skip the primality validation layer.
    cls = _classify(d, p)
    odd = e & 1
    sq = p ** (e >> 1)
    if cls is SplitClass.INERT:
        if odd:
            return (-1, None, odd, sq, 1)
        return (0, _chain_rat(p, e >> 1, n), odd, sq, 1)
    if cls is SplitClass.RAMIFIED:
        A, B = _chain(p, e, n)
        if B == 0:
            return (0, A, odd, sq, 1)
        return (1, (A, B, p), odd, sq, 1)
    if e == 1:
        A, B = _split_pair(p, 0, 1, n)
        if B == 0:
            return (0, A, odd, sq, 2)
        return (1, (A, B, p), odd, sq, 2)
    alts = [_split_pair(p, m, e - m, n) for m in range(e // 2 + 1)]
    return (2, (alts, p, e), odd, sq, e + 1)


def _coords(d: int, lo: int, hi: int):
    """Doubled coordinates and norms of every canonical element with norm in [lo, hi)."""
    D = -d
    hi_inc = hi - 1
    xs_parts: list[np.ndarray] = []
    ys_parts: list[np.ndarray] = []

    def emit(arr: np.ndarray, y: int) -> None:
        xs_parts.append(arr)
        ys_parts.append(np.full(arr.size, y, dtype=np.int64))

    if d % 4 != 1:
        bmax = math.isqrt(hi_inc // D) if hi_inc >= D else 0
        for b in range(bmax + 1):
            rem_hi = hi_inc - D * b * b
            rem_lo = lo - D * b * b
            a_hi = math.isqrt(rem_hi)
            a_lo = 0 if rem_lo <= 0 else math.isqrt(rem_lo - 1) + 1
            if d == -1 or b == 0:
                a_lo = max(a_lo, 1)
                if a_lo > a_hi:
                    continue
                emit(np.arange(a_lo, a_hi + 1, dtype=np.int64), b)
            else:
                # Upper half plane: both signs of the rational part.
                if a_lo > a_hi:
                    continue
                arr = np.arange(a_lo, a_hi + 1, dtype=np.int64)
                emit(arr, b)
                pos = arr[arr > 0]
                if pos.size:
                    emit(-pos, b)
        if not xs_parts:
            empty = np.empty(0, dtype=np.int64)
            return empty, empty, empty
        xs = np.concatenate(xs_parts) * 2
        ys = np.concatenate(ys_parts) * 2
    else:
        LO, HI = 4 * lo, 4 * hi_inc
        ymax = math.isqrt(HI // D) if HI >= D else 0
        for y in range(ymax + 1):
            rem_hi = HI - D * y * y
            rem_lo = LO - D * y * y
            x_hi = math.isqrt(rem_hi)
            x_lo = 0 if rem_lo <= 0 else math.isqrt(rem_lo - 1) + 1
            par = y & 1
            if y == 0:
                start = max(x_lo, 2)
                start += start & 1
                if start > x_hi:
                    continue
                emit(np.arange(start, x_hi + 1, 2, dtype=np.int64), 0)
            elif d == -3:
                # Sixth-turn sector: x > y with matching parity.
                start = max(x_lo, y + 2)
                if (start & 1) != par:
                    start += 1
                if start > x_hi:
                    continue
                emit(np.arange(start, x_hi + 1, 2, dtype=np.int64), y)
            else:
                start = x_lo if (x_lo & 1) == par else x_lo + 1
                if start > x_hi:
                    continue
                arr = np.arange(start, x_hi + 1, 2, dtype=np.int64)
                emit(arr, y)
                pos = arr[arr > 0]
                if pos.size:
                    emit(-pos, y)
        if not xs_parts:
            empty = np.empty(0, dtype=np.int64)
            return empty, empty, empty
        xs = np.concatenate(xs_parts)
        ys = np.concatenate(ys_parts)
    ns = (xs * xs + D * ys * ys) >> 2
    return xs, ys, ns


def _max_distinct_primes(hi: int) -> int:
    prod, k = 1, 0
    for p in primes_up_to(64):
        prod *= p
        k += 1
        if prod > hi:
            return k
    raise ValueError(f"bound {hi} too large for the factor sieve")


def _factor_segment(lo: int, hi: int):
    """Factor every integer in [lo, hi): (primes, exponents, count) row per value."""
    width = hi - lo
    maxf = _max_distinct_primes(hi)
    ptype = np.int32 if hi <= 2**31 else np.int64
    res = np.arange(lo, hi, dtype=np.int64)
    cnt = np.zeros(width, dtype=np.int8)
    fp = np.zeros((width, maxf), dtype=ptype)
    fe = np.zeros((width, maxf), dtype=np.int8)
    for p in primes_up_to(math.isqrt(max(hi - 1, 1))):
        start = (-lo) % p
        if start >= width:
            continue
        idx = np.arange(start, width, p, dtype=np.int64)
        col = cnt[idx]
        fp[idx, col] = p
        fe[idx, col] = 1
        res[idx] //= p
        pk = p * p
        while pk < hi:
            s2 = (-lo) % pk
            if s2 >= width:
                break
            idx2 = np.arange(s2, width, pk, dtype=np.int64)
            fe[idx2, cnt[idx2]] += 1
            res[idx2] //= p
            pk *= p
        cnt[idx] += 1
    big = np.nonzero(res > 1)[0]
    fp[big, cnt[big]] = res[big]
    fe[big, cnt[big]] = 1
    cnt[big] += 1
    return fp, fe, cnt


def _min_split_exp(z: QuadInt, pi: QuadInt, e: int) -> int:
    k, w = 0, z
    while k <= e and (q := try_div(w, pi)) is not None:
        w, k = q, k + 1
    return min(k, e - k)


def scan_shard(
    d: int, n: int, lo: int, hi: int, t_filter: frozenset[int] | None = None
) -> list[tuple[int, int, int]]:
    """Elements with norm in [lo, hi) whose n-index is an integer t >= 2.

    Returns (x, y, t) triples in doubled coordinates, ordered by norm.
    t_filter, when given, restricts which integer values are reported.
    """
    if n < 1:
        raise ValueError("scan expects a positive power n")
    xs, ys, ns = _coords(d, lo, hi)
    if ns.size == 0:
        return []
    uniq, counts = np.unique(ns, return_counts=True)
    fp, fe, fc = _factor_segment(lo, hi)
    rows = (uniq - lo).astype(np.int64)
    FP = fp[rows].tolist()
    FE = fe[rows].tolist()
    FC = fc[rows].tolist()
    del fp, fe, fc, rows

    uniq_l = uniq.tolist()
    counts_l = counts.tolist()
    n_odd = n & 1
    half_pow = (n - 1) // 2 if n_odd else n // 2
    contribs: dict[int, tuple] = {}
    hits: list[tuple[int, int, int]] = []

    for i, N in enumerate(uniq_l):
        ps = FP[i]
        es = FE[i]
        rational = 1
        r0 = 1
        s_part = 1
        count_pred = 1
        dims: list = []
        dim_meta: list = []
        for j in range(FC[i]):
            p = ps[j]
            e = es[j]
            key = (p << 8) | e
            c = contribs.get(key)
            if c is None:
                c = _build_contrib(d, p, e, n)
                contribs[key] = c
            kind, payload, odd, sq, cmult = c
            if kind < 0:
                raise InternalInconsistency(
                    f"inert prime {p} with odd exponent {e} in norm {N} (d={d})"
                )
            if odd:
                r0 *= p
            s_part *= sq
            count_pred *= cmult
            if kind == 0:
                rational *= payload
            else:
                dims.append(payload)
                dim_meta.append(kind)
        if count_pred != counts_l[i]:
            raise InternalInconsistency(
                f"norm {N} (d={d}): {counts_l[i]} elements enumerated, {count_pred} predicted"
            )
        target_r = r0 if n_odd else 1
        denom = (s_part if n_odd else 1) * N**half_pow

        if not dims:
            t, rem = divmod(rational, denom)
            if rem == 0 and t >= 2 and (t_filter is None or t in t_filter):
                sel = np.nonzero(ns == N)[0]
                for k in sel.tolist():
                    hits.append((int(xs[k]), int(ys[k]), t))
            continue

        # Expand the alternative sets (only split primes with e >= 2 have more
        # than one) and test each combination's surd expansion.
        alt_lists = []
        for payload, kind in zip(dims, dim_meta):
            if kind == 1:
                alt_lists.append([payload])
            else:
                alts, p, e = payload
                alt_lists.append([(A, B, p, m) for m, (A, B) in enumerate(alts)])
        matched: list[tuple] = []
        for combo in iproduct(*alt_lists):
            terms = {1: rational}
            for entry in combo:
                A, B, p = entry[0], entry[1], entry[2]
                new: dict[int, int] = {}
                for rad, cc in terms.items():
                    if A:
                        new[rad] = cc * A
                    if B:
                        new[rad * p] = cc * B
                terms = new
            if len(terms) != 1:
                continue
            ((rad, cval),) = terms.items()
            if rad != target_r:
                continue
            t, rem = divmod(cval, denom)
            if rem == 0 and t >= 2 and (t_filter is None or t in t_filter):
                matched.append((combo, t))
        if not matched:
            continue

        # Rare path: pin down which elements of this norm realize a matching
        # exponent profile (nothing to resolve unless some alternative set had
        # a real choice).
        sel = np.nonzero(ns == N)[0]
        resolver = [
            (k, payload[1], payload[2])
            for k, (payload, kind) in enumerate(zip(dims, dim_meta))
            if kind == 2
        ]
        pis = {p: prime_above(ring(d), p) for _, p, _ in resolver}
        for k in sel.tolist():
            z = QuadInt._raw(d, int(xs[k]), int(ys[k]))
            profile = {p: _min_split_exp(z, pis[p], e) for _, p, e in resolver}
            for combo, t in matched:
                ok = all(
                    combo[dim_idx][3] == profile[p] for dim_idx, p, _ in resolver
                )
                if ok:
                    hits.append((z.x, z.y, t))
                    break
    return hits


def scan_shard_task(args) -> tuple[int, int, list[tuple[int, int, int]]]:
    """Pool-friendly wrapper: args = (d, n, lo, hi, t_list or None)."""
    d, n, lo, hi, t_list = args
    tf = frozenset(t_list) if t_list is not None else None
    return lo, hi, scan_shard(d, n, lo, hi, t_filter=tf)
