"""Compiled inner loops for pair and multiset sumset fingerprints.

Every sumset is reduced to a 64-bit fingerprint of its sorted distinct sums.
Fingerprints are only ever used to *propose* equalities; callers confirm each
proposed equality on the exact sums before reporting it.
"""

import numpy as np
from numba import njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)


@njit(cache=True, inline="always")
def _mix(x):
    x = x ^ (x >> _S30)
    x = x * _M1
    x = x ^ (x >> _S27)
    x = x * _M2
    return x ^ (x >> _S31)


@njit(cache=True)
def _hash_sorted(buf, length):
    h = _mix(np.uint64(length) + _GOLDEN)
    for t in range(length):
        h = _mix(h ^ (np.uint64(buf[t]) + _GOLDEN))
    if h == 0:
        h = np.uint64(1)
    return h


@njit(cache=True)
def _sort_unique(buf, length):
    # insertion sort; buffers hold at most k**h entries
    for a in range(1, length):
        v = buf[a]
        b = a - 1
        while b >= 0 and buf[b] > v:
            buf[b + 1] = buf[b]
            b -= 1
        buf[b + 1] = v
    out = 0
    for a in range(length):
        if out == 0 or buf[a] != buf[out - 1]:
            buf[out] = buf[a]
            out += 1
    return out


@njit(cache=True)
def _pair_hash(sets, i, j, buf):
    k = sets.shape[1]
    n = 0
    for a in range(k):
        x = sets[i, a]
        for b in range(k):
            buf[n] = x + sets[j, b]
            n += 1
    n = _sort_unique(buf, n)
    return _hash_sorted(buf, n)


@njit(cache=True)
def pair_fingerprints(sets):
    """Fingerprints of A_i + A_j for all i <= j, in row-major pair order."""
    m, k = sets.shape
    out = np.empty(m * (m + 1) // 2, dtype=np.uint64)
    buf = np.empty(k * k, dtype=np.int64)
    pos = 0
    for i in range(m):
        for j in range(i, m):
            out[pos] = _pair_hash(sets, i, j, buf)
            pos += 1
    return out


@njit(cache=True)
def pairs_from_indices(positions, m):
    """Invert the row-major i <= j pair order used by pair_fingerprints."""
    starts = np.empty(m, dtype=np.int64)
    for i in range(m):
        starts[i] = i * m - i * (i - 1) // 2
    out = np.empty((positions.shape[0], 2), dtype=np.int64)
    for t in range(positions.shape[0]):
        i = np.searchsorted(starts, positions[t], side="right") - 1
        out[t, 0] = i
        out[t, 1] = i + positions[t] - starts[i]
    return out


@njit(cache=True)
def count_duplicate_runs(sorted_fp):
    """Sum of C(c, 2) over runs of equal values in a sorted array."""
    total = 0
    run = 1
    for t in range(1, sorted_fp.shape[0]):
        if sorted_fp[t] == sorted_fp[t - 1]:
            run += 1
        else:
            total += run * (run - 1) // 2
            run = 1
    if sorted_fp.shape[0] > 0:
        total += run * (run - 1) // 2
    return total


@njit(cache=True)
def _multiset_hash(sets, idx, h, buf, tmp):
    k = sets.shape[1]
    length = k
    for b in range(k):
        buf[b] = sets[idx[0], b]
    for t in range(1, h):
        n = 0
        row = idx[t]
        for a in range(length):
            x = buf[a]
            for b in range(k):
                tmp[n] = x + sets[row, b]
                n += 1
        n = _sort_unique(tmp, n)
        for a in range(n):
            buf[a] = tmp[a]
        length = n
    return _hash_sorted(buf, length)


@njit(cache=True)
def multiset_fingerprints(sets, h, total):
    """Fingerprints of all h-fold sums over non-decreasing index tuples.

    Returns the fingerprints and the index tuples, both in lexicographic
    tuple order. ``total`` is the precomputed number of tuples.
    """
    m, k = sets.shape
    fps = np.empty(total, dtype=np.uint64)
    tuples = np.empty((total, h), dtype=np.int32)
    idx = np.zeros(h, dtype=np.int64)
    width = 1
    for _ in range(h):
        width *= k
    buf = np.empty(width, dtype=np.int64)
    tmp = np.empty(width, dtype=np.int64)
    pos = 0
    if m == 0:
        return fps[:0], tuples[:0]
    while True:
        fps[pos] = _multiset_hash(sets, idx, h, buf, tmp)
        for t in range(h):
            tuples[pos, t] = idx[t]
        pos += 1
        # advance to the next non-decreasing tuple
        t = h - 1
        while t >= 0 and idx[t] == m - 1:
            t -= 1
        if t < 0:
            break
        idx[t] += 1
        for u in range(t + 1, h):
            idx[u] = idx[t]
    return fps, tuples


@njit(cache=True)
def _bucket_size(group_start, group_min, s):
    g = group_min.shape[0]
    lo = 0
    hi = g - 1
    total = 0
    while lo <= hi:
        v = group_min[lo] + group_min[hi]
        if v < s:
            lo += 1
        elif v > s:
            hi -= 1
        else:
            a = group_start[lo + 1] - group_start[lo]
            if lo == hi:
                total += a * (a + 1) // 2
            else:
                total += a * (group_start[hi + 1] - group_start[hi])
            lo += 1
            hi -= 1
    return total


@njit(cache=True)
def min_sum_bucket_sizes(group_start, group_min):
    """Number of pairs i <= j whose minima add up to each possible value."""
    lo = 2 * group_min[0]
    hi = 2 * group_min[-1]
    out = np.zeros(hi - lo + 1, dtype=np.int64)
    for s in range(lo, hi + 1):
        out[s - lo] = _bucket_size(group_start, group_min, s)
    return out


@njit(cache=True)
def sidon_scan(sets, group_start, group_min, table, s_from, skip):
    """Stream pairs bucket by bucket (equal minimum sums) looking for a repeat.

    ``sets`` must be sorted so rows with equal minimum are contiguous; groups
    are described by ``group_start``/``group_min``. ``table`` is scratch
    space whose length is a power of two at least twice the largest bucket.
    Fingerprints listed in ``skip`` (sorted) were already examined exactly by
    the caller and are ignored inside bucket ``s_from`` only.

    Returns ``(s, fp)`` for the first bucket holding a repeated fingerprint,
    or ``(-1, 0)`` when every fingerprint is distinct.
    """
    k = sets.shape[1]
    g = group_min.shape[0]
    buf = np.empty(k * k, dtype=np.int64)
    s_lo = 2 * group_min[0]
    s_hi = 2 * group_min[-1]
    for s in range(max(s_from, s_lo), s_hi + 1):
        size = _bucket_size(group_start, group_min, s)
        if size < 2:
            continue
        cap = 4
        while cap < 2 * size:
            cap *= 2
        mask = np.uint64(cap - 1)
        found = np.uint64(0)
        lo = 0
        hi = g - 1
        while lo <= hi and found == 0:
            v = group_min[lo] + group_min[hi]
            if v < s:
                lo += 1
                continue
            if v > s:
                hi -= 1
                continue
            for i in range(group_start[lo], group_start[lo + 1]):
                j0 = i if lo == hi else group_start[hi]
                for j in range(j0, group_start[hi + 1]):
                    fp = _pair_hash(sets, i, j, buf)
                    if s == s_from and skip.shape[0] > 0:
                        t = np.searchsorted(skip, fp)
                        if t < skip.shape[0] and skip[t] == fp:
                            continue
                    slot = fp & mask
                    while table[slot] != 0 and table[slot] != fp:
                        slot = (slot + np.uint64(1)) & mask
                    if table[slot] == fp:
                        found = fp
                        break
                    table[slot] = fp
                if found != 0:
                    break
            lo += 1
            hi -= 1
        table[:cap] = 0
        if found != 0:
            return s, found
    return -1, np.uint64(0)


@njit(cache=True)
def bucket_pairs_with_fp(sets, group_start, group_min, s, fp):
    """All pairs (i, j) in the min-sum bucket ``s`` with fingerprint ``fp``."""
    k = sets.shape[1]
    g = group_min.shape[0]
    buf = np.empty(k * k, dtype=np.int64)
    out = []
    lo = 0
    hi = g - 1
    while lo <= hi:
        v = group_min[lo] + group_min[hi]
        if v < s:
            lo += 1
            continue
        if v > s:
            hi -= 1
            continue
        for i in range(group_start[lo], group_start[lo + 1]):
            j0 = i if lo == hi else group_start[hi]
            for j in range(j0, group_start[hi + 1]):
                if _pair_hash(sets, i, j, buf) == fp:
                    out.append((i, j))
        lo += 1
        hi -= 1
    return out


@njit(cache=True)
def colex_unrank(ranks, n, k, binom):
    """Map colex ranks to k-subsets of {1..n} (rows ascending).

    ``binom[x, r]`` must hold C(x, r) for 0 <= x <= n, 0 <= r <= k.
    """
    out = np.empty((ranks.shape[0], k), dtype=np.int64)
    for t in range(ranks.shape[0]):
        r = ranks[t]
        x = n
        for pos in range(k, 0, -1):
            x -= 1
            while binom[x, pos] > r:
                x -= 1
            r -= binom[x, pos]
            out[t, pos - 1] = x + 1
    return out
