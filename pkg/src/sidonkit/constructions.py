"""Explicit large Sidon systems and B_2[g] systems."""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, product

from .setcore import KSet
from .verifier import Family

# Optimal Golomb rulers (equivalently, shortest Sidon sets) for k <= 8.
GOLOMB_RULERS = {
    2: (0, 1),
    3: (0, 1, 3),
    4: (0, 1, 4, 6),
    5: (0, 1, 4, 9, 11),
    6: (0, 1, 4, 10, 12, 17),
    7: (0, 1, 4, 10, 18, 23, 25),
    8: (0, 1, 4, 9, 15, 22, 32, 34),
}


def is_sidon_set(elements) -> bool:
    """Pairwise sums (with repetition) all distinct."""
    seen = set()
    for a, b in combinations_with_replacement(elements, 2):
        if a + b in seen:
            return False
        seen.add(a + b)
    return True


def next_prime(x: int) -> int:
    x = max(x, 2)
    while any(x % d == 0 for d in range(2, math.isqrt(x) + 1)):
        x += 1
    return x


@dataclass(frozen=True)
class SidonBase:
    """A Sidon set anchored at 0, with the prime that generated it (0 if none)."""

    elements: KSet
    prime_p: int = 0

    def __post_init__(self):
        els = self.elements.elements
        if els[0] != 0:
            raise ValueError(f"Sidon base must contain 0, got {els}")
        if not is_sidon_set(els):
            raise ValueError(f"{els} is not a Sidon set")

    @property
    def k(self) -> int:
        return len(self.elements)

    @property
    def top(self) -> int:
        return self.elements.max


def erdos_turan_sidon(k: int) -> SidonBase:
    """The first ``k`` points ``2p*i + (i*i mod p)`` for the least prime p >= k."""
    if k < 2:
        raise ValueError("k must be at least 2")
    p = next_prime(k)
    els = tuple(2 * p * i + (i * i) % p for i in range(k))
    return SidonBase(KSet(els), p)


def golomb_base(k: int) -> SidonBase:
    """Shortest known Sidon set with ``k`` elements (table covers k <= 8)."""
    if k not in GOLOMB_RULERS:
        raise ValueError(f"no tabulated ruler for k={k}")
    return SidonBase(KSet(GOLOMB_RULERS[k]))


def construct_k2(n: int) -> Family:
    """{1, 1+i} for 1 <= i < n together with {n-i, n} for 1 <= i <= n-2."""
    if n < 3:
        raise ValueError("construct_k2 needs n >= 3")
    sets = [(1, 1 + i) for i in range(1, n)]
    sets += [(n - i, n) for i in range(1, n - 1)]
    return Family(tuple(KSet(s, n) for s in sets), n, 2)


def excluded_dilations(top: int) -> set[tuple[int, int, int]]:
    """All dilations of {0,1,2} and {0,1,3} that fit inside [0, top]."""
    out = set()
    for base in ((0, 1, 2), (0, 1, 3)):
        lam = 1
        while lam * base[2] <= top:
            out.add(tuple(lam * x for x in base))
            lam += 1
    return out


def construct_k3(n: int) -> Family:
    """1 + A for every 3-set A of {0..n-1} containing 0, minus the bad dilations."""
    if n < 5:
        raise ValueError("construct_k3 needs n >= 5")
    bad = excluded_dilations(n - 1)
    sets = [(1, 1 + a, 1 + b) for a, b in combinations(range(1, n), 2)
            if (0, a, b) not in bad]
    return Family(tuple(KSet(s, n) for s in sets), n, 3)


@dataclass(frozen=True)
class IntervalSpec:
    """Integers in ``[lower, upper)`` assigned to coordinate ``index``."""

    index: int
    lower: int
    upper: int

    def __post_init__(self):
        if self.lower >= self.upper:
            raise ValueError(f"empty interval {self}")

    def __len__(self):
        return self.upper - self.lower

    def __contains__(self, x):
        return self.lower <= x < self.upper

    def values(self):
        return range(self.lower, self.upper)


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def block_intervals(n: int, base: SidonBase) -> list[IntervalSpec]:
    """I_0 = {0} and I_i = [q*a_i, q*(a_i + 1/2)) with q = n / (a_top + 1).

    Endpoints are computed in exact integer arithmetic.
    """
    d = base.top + 1
    out = [IntervalSpec(0, 0, 1)]
    for i, a in enumerate(base.elements.elements[1:], start=1):
        lower = _ceil_div(n * a, d)
        # smallest x with 2*x*d >= n*(2a+1), i.e. the exclusive upper end
        upper = _ceil_div(n * (2 * a + 1), 2 * d)
        out.append(IntervalSpec(i, lower, upper))
    check_interval_sums(out)
    return out


def check_interval_sums(intervals: list[IntervalSpec]) -> None:
    """Raise unless the sums I_i + I_j are pairwise disjoint over unordered {i, j}."""
    spans = []
    for a, b in combinations_with_replacement(intervals, 2):
        spans.append((a.lower + b.lower, a.upper + b.upper - 2, (a.index, b.index)))
    spans.sort()
    for (lo1, hi1, ij1), (lo2, hi2, ij2) in zip(spans, spans[1:]):
        if lo2 <= hi1:
            raise ValueError(f"interval sums {ij1} and {ij2} overlap")


def construct_k4(n: int, k: int, base: SidonBase | None = None) -> Family:
    """All sets {b_0, ..., b_{k-1}} with b_i in I_i, shifted by 1.

    ``base`` defaults to :func:`erdos_turan_sidon` ``(k)``.
    """
    if k < 3:
        raise ValueError("construct_k4 needs k >= 3")
    if base is None:
        base = erdos_turan_sidon(k)
    if base.k != k:
        raise ValueError(f"base has {base.k} elements, expected {k}")
    if n < 2 * (base.top + 1):
        raise ValueError(f"n must be at least {2 * (base.top + 1)} for this base")
    intervals = block_intervals(n, base)
    sets = [(1,) + tuple(1 + b for b in bs)
            for bs in product(*(iv.values() for iv in intervals[1:]))]
    return Family(tuple(KSet(s, n) for s in sets), n, k)


def decode_k4_sumset(sums, intervals: list[IntervalSpec], shift: int = 1):
    """Recover the pair (U, V), U <= V, from the sumset U + V.

    ``sums`` is the sumset of two members of :func:`construct_k4` output built
    on ``intervals``; ``shift`` is the offset applied to those members.
    Returns two tuples, or raises ``ValueError`` when decoding fails.
    """
    raw = sorted(x - 2 * shift for x in sums)

    def inside(lo, hi):
        a, b = bisect_left(raw, lo), bisect_left(raw, hi)
        return raw[a:b]

    k = len(intervals)
    hits = []
    for iv in intervals[1:]:
        hit = inside(iv.lower, iv.upper)
        if not 1 <= len(hit) <= 2:
            raise ValueError(f"interval {iv.index} holds {len(hit)} sums")
        hits.append(hit)
    u = [0] + [hit[0] for hit in hits]
    v = [0] + [hit[-1] for hit in hits]
    # first coordinate where U and V differ; U <= V puts the smaller value in U
    i0 = next((i for i in range(1, k) if len(hits[i - 1]) == 2), None)
    if i0 is not None:
        first = intervals[i0]
        for i in range(i0 + 1, k):
            if len(hits[i - 1]) == 1:
                continue
            p, q = hits[i - 1]
            iv = intervals[i]
            cross = set(inside(first.lower + iv.lower, first.upper + iv.upper - 1))
            if {u[i0] + q, p + v[i0]} == cross:
                u[i], v[i] = p, q
            elif {u[i0] + p, q + v[i0]} == cross:
                u[i], v[i] = q, p
            else:
                raise ValueError(f"cannot resolve coordinate {i}")
    return (tuple(x + shift for x in u), tuple(x + shift for x in v))


def _max_unordered_reps(elements) -> int:
    counts: dict[int, int] = {}
    for a, b in combinations_with_replacement(elements, 2):
        counts[a + b] = counts.get(a + b, 0) + 1
    return max(counts.values(), default=0)


#: Size guarantee of :func:`base_b2g_set`: at least
#: ``B2G_SIZE_CONSTANT * sqrt(g_half * m)`` elements once ``m >= 4 * g_half``.
B2G_SIZE_CONSTANT = 0.25


def _sidon_candidates(m):
    yield (0, 1)
    size = 2
    while True:
        s_set = erdos_turan_sidon(size).elements.elements
        # the top element grows with size, so the first overflow ends the scan
        if s_set[-1] + 1 > m:
            return
        yield s_set
        size += 1


def base_b2g_set(m: int, g_half: int) -> KSet:
    """A set in [1, m] in which every integer has at most ``g_half`` representations.

    Stacks ``g_half`` translated copies ``S, S + s, ..., S + (g_half-1)s`` of
    an Erdos-Turan Sidon set ``S``. A step ``s = 2 max(S) + 1`` is always
    valid; smaller steps are tried first and kept only if brute-force
    verification passes. The largest verified set that fits is returned.
    """
    if m < 2 or g_half < 1:
        raise ValueError("need m >= 2 and g_half >= 1")
    best: tuple[int, ...] = (0,)
    for s_set in _sidon_candidates(m):
        top = s_set[-1]
        for step in range(top + 1, 2 * top + 2):
            cand = tuple(x + j * step for j in range(g_half) for x in s_set)
            if cand[-1] + 1 > m:
                break
            if _max_unordered_reps(cand) <= g_half:
                if len(cand) > len(best):
                    best = cand
                break
    out = tuple(x + 1 for x in best)
    if _max_unordered_reps(out) > g_half:
        raise AssertionError("base_b2g_set produced an invalid set")
    return KSet(out, m)


def zero_anchored_sidon_system(m: int, k: int) -> Family:
    """A Sidon system of k-subsets of {0..m}, every member containing 0."""
    if k == 2:
        sets = [(0, d) for d in range(1, m + 1)]
    elif k == 3:
        sets = [tuple(x - 1 for x in s.elements) for s in construct_k3(m + 1)]
    else:
        sets = [tuple(x - 1 for x in s.elements) for s in construct_k4(m + 1, k)]
    return Family(tuple(KSet(s, m) for s in sets), m, k, zero_anchored=True)


def construct_b2g(n: int, k: int, g: int) -> Family:
    """{a + I : a in A, I in J} with A a B_2[g//2] set and J a Sidon system."""
    if g < 2 or k < 2:
        raise ValueError("construct_b2g needs g >= 2 and k >= 2")
    m = n // 2
    try:
        a_set = base_b2g_set(m, g // 2)
        inner = zero_anchored_sidon_system(m, k)
    except ValueError as exc:
        raise ValueError(f"infeasible parameters n={n}, k={k}, g={g}: {exc}") from exc
    if len(inner) == 0:
        raise ValueError(f"infeasible parameters n={n}, k={k}, g={g}")
    sets = [s.shift(a, n) for a in a_set for s in inner]
    return Family(tuple(sets), n, k)

