"""Sidon and B_h[g] checks for families of k-sets.

All heavy lifting goes through 64-bit sumset fingerprints computed by the
compiled kernels; any two pairs whose fingerprints agree are compared on
their exact sums before anything is reported, so results carry no false
positives.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable

import numpy as np

from . import _kernels as K
from .setcore import KSet, SumsetKey, h_fold_sumset, mask_bits, sumset_mask

#: Largest number of pairs (or h-tuples) whose fingerprints are held in memory
#: at once by the collision listing routines.
PAIR_CAP = 60_000_000


class CapExceeded(RuntimeError):
    """A desk-scale limit on enumeration size was hit."""


@dataclass(frozen=True)
class Family:
    """A uniform family of distinct k-sets, kept in lexicographic order.

    Elements live in ``[1, n]``, or in ``{0, ..., n}`` when ``zero_anchored``.
    """

    sets: tuple[KSet, ...]
    n: int
    k: int
    zero_anchored: bool = False

    def __post_init__(self):
        lo = 0 if self.zero_anchored else 1
        fixed = []
        for s in self.sets:
            s = s if isinstance(s, KSet) else KSet.of(s, self.n)
            if len(s) != self.k:
                raise ValueError(f"set {s} has size {len(s)}, expected {self.k}")
            if s.min < lo or s.max > self.n:
                raise ValueError(f"set {s} leaves the ground set [{lo}, {self.n}]")
            if s.ambient_n != self.n:
                s = KSet(s.elements, self.n)
            fixed.append(s)
        fixed.sort(key=lambda s: s.elements)
        for a, b in zip(fixed, fixed[1:]):
            if a == b:
                raise ValueError(f"duplicate set {a}")
        object.__setattr__(self, "sets", tuple(fixed))

    @classmethod
    def from_sets(cls, sets: Iterable, n: int | None = None, k: int | None = None,
                  zero_anchored: bool | None = None) -> Family:
        """Build a family, inferring ``n``, ``k`` and the ground set if omitted."""
        tuples = [tuple(sorted(s)) for s in sets]
        if k is None:
            if not tuples:
                raise ValueError("cannot infer k from an empty family")
            k = len(tuples[0])
        if zero_anchored is None:
            zero_anchored = any(t[0] == 0 for t in tuples)
        if n is None:
            n = max((t[-1] for t in tuples), default=k)
            n = max(n, 1)
        return cls(tuple(KSet(t, n) for t in tuples), n, k, zero_anchored)

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __contains__(self, s):
        return KSet.of(s) in self._members

    @cached_property
    def _members(self):
        return frozenset(self.sets)

    @cached_property
    def array(self) -> np.ndarray:
        """The sets as an ``(m, k)`` int64 array, one row per set."""
        if not self.sets:
            return np.zeros((0, max(self.k, 1)), dtype=np.int64)
        return np.array([s.elements for s in self.sets], dtype=np.int64)

    def shifted(self, t: int) -> Family:
        return Family(tuple(s.shift(t) for s in self.sets), self.n + t, self.k,
                      self.zero_anchored)


@dataclass(frozen=True)
class CollisionRecord:
    """Two distinct unordered pairs of sets with the same sumset.

    Stored canonically: each pair ascending, left pair before right pair.
    ``ell`` is the number of distinct sets among the four.
    """

    left_pair: tuple[KSet, KSet]
    right_pair: tuple[KSet, KSet]
    key: SumsetKey
    ell: int

    @classmethod
    def from_pairs(cls, p, q, key: SumsetKey | None = None) -> CollisionRecord:
        p = tuple(sorted((KSet.of(x) if not isinstance(x, KSet) else x for x in p),
                         key=lambda s: s.elements))
        q = tuple(sorted((KSet.of(x) if not isinstance(x, KSet) else x for x in q),
                         key=lambda s: s.elements))
        if _pair_tuple(q) < _pair_tuple(p):
            p, q = q, p
        if key is None:
            base, mask = sumset_mask(p[0].elements, p[1].elements)
            key = SumsetKey(tuple(base + d for d in mask_bits(mask)))
        ell = len({p[0], p[1], q[0], q[1]})
        return cls(p, q, key, ell)

    def to_json(self) -> str:
        return json.dumps({
            "left": [list(s.elements) for s in self.left_pair],
            "right": [list(s.elements) for s in self.right_pair],
            "key": list(self.key.sums),
            "ell": self.ell,
        }, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> CollisionRecord:
        d = json.loads(line)
        rec = cls.from_pairs(d["left"], d["right"], SumsetKey(tuple(d["key"])))
        if rec.ell != d["ell"]:
            raise ValueError(f"ell mismatch in {line!r}")
        return rec

    def sort_key(self):
        return (self.key.sums, _pair_tuple(self.left_pair),
                _pair_tuple(self.right_pair))


def _pair_tuple(p):
    return tuple(s.elements for s in p)


def _exact_pair_groups(sets, pairs):
    """Group index pairs by their exact sumset."""
    groups = {}
    for i, j in pairs:
        groups.setdefault(sumset_mask(sets[i].elements, sets[j].elements),
                          []).append((int(i), int(j)))
    return groups


def _key_of(base_mask) -> SumsetKey:
    base, mask = base_mask
    return SumsetKey(tuple(base + d for d in mask_bits(mask)))


def _groups_by_min(arr):
    group_min, starts = np.unique(arr[:, 0], return_index=True)
    group_start = np.append(starts, arr.shape[0]).astype(np.int64)
    return group_start, group_min.astype(np.int64)


def first_collision(f: Family) -> CollisionRecord | None:
    """Some violating record of ``f`` or ``None`` when ``f`` is Sidon.

    Pairs are streamed in buckets of equal minimum sum (equal sumsets share
    their minimum), so memory stays proportional to the largest bucket.
    """
    if len(f) < 2:
        return None
    arr = f.array
    group_start, group_min = _groups_by_min(arr)
    sizes = K.min_sum_bucket_sizes(group_start, group_min)
    cap = 4
    while cap < 2 * int(sizes.max()):
        cap *= 2
    table = np.zeros(cap, dtype=np.uint64)
    s_from = 0
    skip: list[int] = []
    while True:
        skip_arr = np.array(sorted(skip), dtype=np.uint64)
        s, fp = K.sidon_scan(arr, group_start, group_min, table, s_from, skip_arr)
        if s < 0:
            return None
        pairs = K.bucket_pairs_with_fp(arr, group_start, group_min, s, np.uint64(fp))
        for bm, members in _exact_pair_groups(f.sets, pairs).items():
            if len(members) > 1:
                (i, j), (u, v) = members[0], members[1]
                return CollisionRecord.from_pairs(
                    (f.sets[i], f.sets[j]), (f.sets[u], f.sets[v]), _key_of(bm))
        # fingerprint clash without equal sumsets: rescan this bucket past it
        if s != s_from:
            skip = []
        skip.append(int(fp))
        s_from = s


def is_sidon(f: Family) -> bool:
    """True iff all sumsets A_i + A_j (i <= j) are pairwise distinct."""
    return first_collision(f) is None


def _check_pair_cap(m):
    total = m * (m + 1) // 2
    if total > PAIR_CAP:
        raise CapExceeded(f"{total} pairs exceed the cap of {PAIR_CAP}")


def collision_buckets(f: Family, min_size: int = 2) -> list[tuple[SumsetKey, list[tuple[int, int]]]]:
    """Exact sumset buckets holding at least ``min_size`` index pairs.

    Returned sorted by key; pairs inside a bucket are ``(i, j)`` with
    ``i <= j`` indexing ``f.sets`` and appear in lexicographic order.
    """
    m = len(f)
    if m == 0:
        return []
    _check_pair_cap(m)
    fps = K.pair_fingerprints(f.array)
    order = np.argsort(fps, kind="stable")
    srt = fps[order]
    change = np.ones(srt.shape[0], dtype=bool)
    change[1:] = srt[1:] != srt[:-1]
    starts = np.flatnonzero(change)
    lengths = np.diff(np.append(starts, srt.shape[0]))
    out = []
    for st, ln in zip(starts[lengths >= min_size], lengths[lengths >= min_size]):
        pairs = K.pairs_from_indices(order[st:st + ln].astype(np.int64), m)
        for bm, members in _exact_pair_groups(f.sets, pairs).items():
            if len(members) >= min_size:
                out.append((_key_of(bm), sorted(members)))
    out.sort(key=lambda kv: kv[0].sums)
    return out


def find_collisions(f: Family) -> list[CollisionRecord]:
    """Every canonical violating record, sorted by (key, left pair)."""
    records = []
    for key, members in collision_buckets(f):
        for (i, j), (u, v) in combinations(members, 2):
            records.append(CollisionRecord.from_pairs(
                (f.sets[i], f.sets[j]), (f.sets[u], f.sets[v]), key))
    records.sort(key=CollisionRecord.sort_key)
    return records


def count_collisions(f: Family) -> int:
    """Number of canonical violating records, without materialising them."""
    m = len(f)
    if m < 2:
        return 0
    _check_pair_cap(m)
    srt = np.sort(K.pair_fingerprints(f.array))
    if K.count_duplicate_runs(srt) == 0:
        return 0
    return sum(len(p) * (len(p) - 1) // 2 for _, p in collision_buckets(f))


def representation_count(f: Family, c, h: int = 2) -> int:
    """Number of multisets {A_1, ..., A_h} from ``f`` whose sum is ``c``."""
    if h < 2:
        raise ValueError("h must be at least 2")
    target = tuple(c.sums if isinstance(c, SumsetKey) else sorted(set(c)))
    if not target or len(f) == 0:
        return 0
    lo, hi = target[0], target[-1]
    sets = f.sets
    mins = [s.min for s in sets]
    maxs = [s.max for s in sets]
    m = len(sets)
    count = 0
    chosen = []

    def rec(start, depth, smin, smax):
        nonlocal count
        if depth == h:
            if smin == lo and smax == hi and h_fold_sumset(chosen).sums == target:
                count += 1
            return
        rem = h - depth - 1
        for i in range(start, m):
            nmin = smin + mins[i]
            # mins are non-decreasing along the lexicographic order
            if nmin + rem * mins[i] > lo:
                break
            if smax + maxs[i] > hi:
                continue
            chosen.append(sets[i])
            rec(i, depth + 1, nmin, smax + maxs[i])
            chosen.pop()

    rec(0, 0, 0, 0)
    return count


def _multiset_groups(f: Family, h: int, min_size: int):
    m = len(f)
    total = math.comb(m + h - 1, h)
    if total > PAIR_CAP:
        raise CapExceeded(f"{total} multisets exceed the cap of {PAIR_CAP}")
    fps, tuples = K.multiset_fingerprints(f.array, h, total)
    order = np.argsort(fps, kind="stable")
    srt = fps[order]
    change = np.ones(srt.shape[0], dtype=bool)
    change[1:] = srt[1:] != srt[:-1]
    starts = np.flatnonzero(change)
    lengths = np.diff(np.append(starts, srt.shape[0]))
    for st, ln in zip(starts[lengths >= min_size], lengths[lengths >= min_size]):
        groups = {}
        for t in order[st:st + ln]:
            idx = tuple(int(x) for x in tuples[t])
            key = h_fold_sumset([f.sets[i] for i in idx])
            groups.setdefault(key, []).append(idx)
        for key, members in groups.items():
            if len(members) >= min_size:
                yield key, members


def max_representation_count(f: Family, h: int = 2) -> int:
    """Largest number of multiset representations of any h-fold sumset."""
    if len(f) == 0:
        return 0
    if h == 2:
        buckets = collision_buckets(f, min_size=2)
        return max((len(p) for _, p in buckets), default=1)
    return max((len(p) for _, p in _multiset_groups(f, h, 2)), default=1)


def is_bhg(f: Family, h: int, g: int) -> bool:
    """True iff no h-fold sumset has more than ``g`` multiset representations."""
    if h < 2 or g < 1:
        raise ValueError("need h >= 2 and g >= 1")
    if len(f) == 0:
        return True
    if h == 2 and g == 1:
        return is_sidon(f)
    if h == 2:
        return not collision_buckets(f, min_size=g + 1)
    for _ in _multiset_groups(f, h, g + 1):
        return False
    return True


def upper_bound_fk(n: int, k: int) -> int:
    """C(n-1, k-1) + n - k, the ceiling on any Sidon system of k-subsets of [n]."""
    if not 2 <= k < n:
        raise ValueError(f"need 2 <= k < n, got k={k}, n={n}")
    return math.comb(n - 1, k - 1) + n - k


def translate_classes(f: Family) -> dict[tuple[int, ...], tuple[int, ...]]:
    """Group the sets of ``f`` by distance pattern.

    Maps each pattern ``P`` (the nonzero elements of a distance set) to the
    sorted translates ``x`` with ``x + (P | {0})`` in ``f``.
    """
    classes: dict[tuple[int, ...], list[int]] = {}
    for s in f.sets:
        x = s.min
        classes.setdefault(tuple(e - x for e in s.elements[1:]), []).append(x)
    return {p: tuple(sorted(xs)) for p, xs in sorted(classes.items())}


def positive_differences(xs) -> set[int]:
    return {b - a for a in xs for b in xs if b > a}


def translate_class_conflicts(classes) -> list[tuple[tuple, tuple, int]]:
    """Differences shared between positive difference sets of distinct classes.

    In a Sidon family the positive difference sets of distinct classes are
    pairwise disjoint, so this list is empty. Each entry is
    ``(pattern_a, pattern_b, d)`` with ``pattern_a < pattern_b``.
    """
    owner: dict[int, tuple] = {}
    out = []
    for pattern, xs in classes.items():
        for d in sorted(positive_differences(xs)):
            if d in owner:
                out.append((owner[d], pattern, d))
            else:
                owner[d] = pattern
    return out


def translate_classes_disjoint(classes) -> bool:
    return not translate_class_conflicts(classes)
