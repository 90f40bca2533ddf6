"""Brute-force ground truth for small instances.

Exact F_k(N) by branch and bound, the complete list of nontrivial sumset
equalities among 3-sets containing 0 together with their classification up
to dilation, exact counts of violating pairs-of-pairs by number of distinct
sets, and the composite-k multiple-representation example.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import reduce
from importlib import resources
from itertools import combinations

from .formats import iter_set_lines
from .setcore import KSet, SumsetKey, h_fold_sumset, normalize, sumset, sumset_mask
from .verifier import (
    CapExceeded,
    CollisionRecord,
    Family,
    collision_buckets,
    find_collisions,
    is_sidon,
    representation_count,
)

#: Largest C(n, k) accepted by :func:`exact_fk`.
EXACT_FK_CAP = 40
#: Largest n accepted by :func:`enumerate_3set_equalities` unless overridden.
ENUM3_CAP = 60
#: Largest C(n, k) accepted by the pair-of-pairs counters.
COUNT_CAP = 5000


# ---------------------------------------------------------------------------
# exact F_k(N)


@dataclass
class ExactResult:
    n: int
    k: int
    value: int
    witness: Family | None = None
    search_stats: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "value": self.value,
            "witness": [list(s.elements) for s in self.witness] if self.witness else None,
            "nodes": self.search_stats.get("nodes"),
            "elapsed": self.search_stats.get("elapsed"),
        }


def _pair_key_table(cands):
    """key[i][j]: integer id of the sumset of candidates i and j."""
    ids: dict = {}
    m = len(cands)
    key = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            bm = sumset_mask(cands[i], cands[j])
            key[i][j] = key[j][i] = ids.setdefault(bm, len(ids))
    return key


def _search(cands, key, prefix):
    """Depth-first include/exclude search below a fixed decision prefix.

    Returns ``(best_size, best_indices, nodes)``; ``best_size`` is -1 when the
    prefix itself is infeasible.
    """
    m = len(cands)
    chosen: list[int] = []
    used: set[int] = set()
    for idx, take in enumerate(prefix):
        if take:
            new = [key[idx][s] for s in chosen] + [key[idx][idx]]
            if len(set(new)) != len(new) or used.intersection(new):
                return -1, [], 1
            chosen.append(idx)
            used.update(new)
    best = [len(chosen) - 1, []]
    nodes = 0

    def dfs(idx):
        nonlocal nodes
        nodes += 1
        if len(chosen) + (m - idx) <= best[0]:
            return
        if idx == m:
            best[0] = len(chosen)
            best[1] = list(chosen)
            return
        new = [key[idx][s] for s in chosen]
        new.append(key[idx][idx])
        if len(set(new)) == len(new) and used.isdisjoint(new):
            chosen.append(idx)
            used.update(new)
            dfs(idx + 1)
            used.difference_update(new)
            chosen.pop()
        dfs(idx + 1)

    dfs(len(prefix))
    return best[0], best[1], nodes


def _search_job(args):
    return _search(*args)


def exact_fk(n: int, k: int, cap: int = EXACT_FK_CAP, split_depth: int = 0,
             workers: int = 1) -> ExactResult:
    """Largest Sidon system of k-subsets of [n], by exhaustive search.

    Candidates are taken in lexicographic order; a branch is cut when even
    taking every remaining candidate cannot beat the best size found. With
    ``split_depth > 0`` the first decisions are enumerated up front and the
    resulting subproblems solved independently (in ``workers`` processes);
    ties are broken in depth-first order, so the witness matches the
    single-threaded search.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    total = math.comb(n, k)
    if total > cap:
        raise CapExceeded(f"C({n},{k}) = {total} exceeds the cap of {cap}")
    t0 = time.perf_counter()
    cands = list(combinations(range(1, n + 1), k))
    key = _pair_key_table(cands)
    depth = min(split_depth, len(cands))
    if depth == 0:
        value, idxs, nodes = _search(cands, key, ())
    else:
        prefixes = []
        for mask in range(2 ** depth):
            # include-first depth-first order of the decision prefixes
            prefixes.append(tuple(not (mask >> (depth - 1 - b)) & 1 for b in range(depth)))
        jobs = [(cands, key, p) for p in prefixes]
        if workers > 1:
            with ProcessPoolExecutor(workers) as ex:
                results = list(ex.map(_search_job, jobs))
        else:
            results = [_search(*j) for j in jobs]
        value, idxs, nodes = -1, [], 0
        for v, ix, nd in results:
            nodes += nd
            if v > value:
                value, idxs = v, ix
    witness = Family.from_sets([cands[i] for i in idxs], n=n, k=k, zero_anchored=False)
    return ExactResult(n, k, value, witness,
                       {"nodes": nodes, "elapsed": time.perf_counter() - t0})


# ---------------------------------------------------------------------------
# sumset equalities among 3-sets containing 0


@dataclass(frozen=True)
class EqualityFamily:
    """One base equality X + Y = V + W, primitive (gcd of all elements is 1)."""

    id: int
    base_quadruple: tuple[KSet, KSet, KSet, KSet]
    base_sumset: SumsetKey

    def __post_init__(self):
        x, y, v, w = self.base_quadruple
        if sumset(x, y) != self.base_sumset or sumset(v, w) != self.base_sumset:
            raise ValueError(f"family {self.id}: sumsets do not match")
        if {x, y} == {v, w}:
            raise ValueError(f"family {self.id}: trivial equality")
        if _gcd_of((x, y, v, w)) != 1:
            raise ValueError(f"family {self.id}: not primitive")

    @property
    def left(self):
        return _ordered_pair(self.base_quadruple[0], self.base_quadruple[1])

    @property
    def right(self):
        return _ordered_pair(self.base_quadruple[2], self.base_quadruple[3])

    def dilated(self, lam: int) -> CollisionRecord:
        quad = [KSet(tuple(lam * e for e in s.elements)) for s in self.base_quadruple]
        return CollisionRecord.from_pairs(quad[:2], quad[2:])


def _gcd_of(sets) -> int:
    return reduce(math.gcd, (e for s in sets for e in s), 0)


def _ordered_pair(a, b):
    a, b = tuple(a), tuple(b)
    return (a, b) if a <= b else (b, a)


def load_equality_families() -> list[EqualityFamily]:
    """The ten base equalities shipped in ``data/equality_families.txt``."""
    text = resources.files("sidonkit").joinpath("data/equality_families.txt").read_text()
    sets = [item for _, item in iter_set_lines(text.splitlines()) if isinstance(item, tuple)]
    if len(sets) % 4:
        raise ValueError("equality file must hold groups of four sets")
    out = []
    for i in range(0, len(sets), 4):
        quad = tuple(KSet(s) for s in sets[i:i + 4])
        out.append(EqualityFamily(i // 4 + 1, quad, sumset(quad[0], quad[1])))
    return out


def zero_anchored_3sets(n: int) -> Family:
    """All 3-subsets of {0..n} that contain 0."""
    sets = [(0, a, b) for a, b in combinations(range(1, n + 1), 2)]
    return Family.from_sets(sets, n=n, k=3, zero_anchored=True)


def enumerate_3set_equalities(n: int, cap: int = ENUM3_CAP) -> list[CollisionRecord]:
    """All canonical records X + Y = V + W, {X, Y} != {V, W}, over 3-subsets of
    {0..n} containing 0."""
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the cap of {cap}")
    if n < 2:
        return []
    return find_collisions(zero_anchored_3sets(n))


@dataclass
class Classification:
    """Records sorted by the base equality they dilate.

    ``by_family[id]`` holds ``(lam, record)`` for records equal to ``lam``
    times base equality ``id``. ``bridged`` holds ``(lam, (id_a, id_b),
    record)`` for records pairing one side of base equality ``id_a`` with one
    side of a different base equality ``id_b`` having the same sumset.
    Anything else lands in ``unclassified``.
    """

    by_family: dict[int, list[tuple[int, CollisionRecord]]]
    bridged: list[tuple[int, tuple[int, int], CollisionRecord]]
    unclassified: list[CollisionRecord]

    @property
    def total(self) -> int:
        return (sum(len(v) for v in self.by_family.values()) + len(self.bridged)
                + len(self.unclassified))


def _reduce_record(rec: CollisionRecord):
    quad = rec.left_pair + rec.right_pair
    g = _gcd_of(quad)
    if g == 0:
        return 0, None, None
    scale = [tuple(e // g for e in s.elements) for s in quad]
    return g, _ordered_pair(scale[0], scale[1]), _ordered_pair(scale[2], scale[3])


def classify_3set_equalities(records, families: list[EqualityFamily] | None = None) -> Classification:
    """Match each record to a dilation of one of the base equalities."""
    if families is None:
        families = load_equality_families()
    quad_index = {}
    pair_index = {}
    for fam in families:
        quad_index[frozenset((fam.left, fam.right))] = fam.id
        pair_index.setdefault(fam.left, fam.id)
        pair_index.setdefault(fam.right, fam.id)
    sumset_of = {fam.id: fam.base_sumset for fam in families}
    out = Classification({fam.id: [] for fam in families}, [], [])
    for rec in records:
        lam, p, q = _reduce_record(rec)
        fid = quad_index.get(frozenset((p, q)))
        if fid is not None:
            out.by_family[fid].append((lam, rec))
            continue
        a, b = pair_index.get(p), pair_index.get(q)
        if a is not None and b is not None and a != b and sumset_of[a] == sumset_of[b]:
            out.bridged.append((lam, (min(a, b), max(a, b)), rec))
        else:
            out.unclassified.append(rec)
    return out


def dual_record(rec: CollisionRecord) -> CollisionRecord:
    """Replace all four sets by their duals; equal sumsets stay equal."""
    from .setcore import dual_3set

    p = [dual_3set(s) for s in rec.left_pair]
    q = [dual_3set(s) for s in rec.right_pair]
    return CollisionRecord.from_pairs(p, q)


# ---------------------------------------------------------------------------
# pair-of-pairs counts


def all_ksets(n: int, k: int, cap: int = COUNT_CAP) -> Family:
    total = math.comb(n, k)
    if total > cap:
        raise CapExceeded(f"C({n},{k}) = {total} exceeds the cap of {cap}")
    return Family.from_sets(combinations(range(1, n + 1), k), n=n, k=k,
                            zero_anchored=False)


def count_c_ell_all(n: int, k: int, cap: int = COUNT_CAP) -> dict[int, int]:
    """Canonical violating records among all k-subsets of [n], split by the
    number of distinct sets involved (2, 3 or 4)."""
    counts = {2: 0, 3: 0, 4: 0}
    if n < k:
        return counts
    f = all_ksets(n, k, cap)
    for _, members in collision_buckets(f):
        for (i, j), (u, v) in combinations(members, 2):
            counts[len({i, j, u, v})] += 1
    return counts


def count_c_ell(n: int, k: int, ell: int, cap: int = COUNT_CAP) -> int:
    if ell not in (2, 3, 4):
        raise ValueError("ell must be 2, 3 or 4")
    return count_c_ell_all(n, k, cap)[ell]


def is_c_prime(rec: CollisionRecord) -> bool:
    """Four distinct sets with A1' != A2', A1' = B1' and A2' = B2'."""
    if rec.ell != 4:
        return False
    a1, a2 = (normalize(s).distance_set for s in rec.left_pair)
    b1, b2 = (normalize(s).distance_set for s in rec.right_pair)
    return a1 != a2 and a1 == b1 and a2 == b2


def count_c_prime(n: int, k: int, cap: int = COUNT_CAP) -> int:
    if n < k:
        return 0
    f = all_ksets(n, k, cap)
    dist = [tuple(e - s.min for e in s.elements) for s in f.sets]
    total = 0
    for _, members in collision_buckets(f):
        for (i, j), (u, v) in combinations(members, 2):
            if len({i, j, u, v}) == 4 and dist[i] != dist[j] \
                    and dist[i] == dist[u] and dist[j] == dist[v]:
                total += 1
    return total


def first_moment(n: int, k: int, p: float, cap: int = COUNT_CAP) -> float:
    """Expected number of violating records, sum over ell of |C(ell)| p**ell."""
    counts = count_c_ell_all(n, k, cap)
    return sum(c * p ** ell for ell, c in counts.items())


# ---------------------------------------------------------------------------
# composite k


def composite_multirep(parts, k: int = 4):
    """Three ways of writing {0,a}+{0,b}+{0,c}+{0,d} as a sum of two 4-sets.

    Returns ``(S, pairings)`` where each pairing is a two-set family whose
    sumset is ``S``.
    """
    if k != 4:
        raise ValueError("only k = 4 is supported")
    two_sets = []
    for p in parts:
        t = tuple(sorted(p)) if not isinstance(p, int) else (0, p)
        if len(t) != 2 or t[0] != 0 or t[1] <= 0:
            raise ValueError(f"parts must be 2-sets {{0, a}} with a > 0, got {p}")
        two_sets.append(t)
    if len(two_sets) != 4:
        raise ValueError("need exactly four parts")
    total = h_fold_sumset(two_sets)
    if len(total) != 16:
        raise ValueError(f"degenerate parts: |S| = {len(total)} < 16")
    n = total.max
    pairings = []
    for (i, j), (u, v) in (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))):
        x = sumset(two_sets[i], two_sets[j]).sums
        y = sumset(two_sets[u], two_sets[v]).sums
        pairings.append(Family.from_sets([x, y], n=n, k=4, zero_anchored=True))
    six = Family.from_sets([s.elements for f in pairings for s in f], n=n, k=4,
                           zero_anchored=True)
    count = representation_count(six, total, 2)
    if count != 3:
        raise ValueError(f"expected 3 representations of S, found {count}")
    return total, pairings


def k_squared_collisions(n: int, k: int, cap: int = COUNT_CAP) -> list[CollisionRecord]:
    """Violating records among k-subsets of {0..n} containing 0 whose sumset
    has the maximal size k**2."""
    total = math.comb(n, k - 1)
    if total > cap:
        raise CapExceeded(f"C({n},{k - 1}) = {total} exceeds the cap of {cap}")
    sets = [(0,) + c for c in combinations(range(1, n + 1), k - 1)]
    f = Family.from_sets(sets, n=n, k=k, zero_anchored=True)
    return [r for r in find_collisions(f) if len(r.key) == k * k]


def sidon_after_removing_bad_dilations(n: int) -> bool:
    """Drop the dilations of {0,1,2} and {0,1,3} from the 3-subsets of {0..n-1}
    containing 0 and report whether what is left is a Sidon system."""
    base = zero_anchored_3sets(n - 1)
    bad = set()
    for rec in enumerate_3set_equalities(n - 1, cap=max(ENUM3_CAP, n)):
        for s in rec.left_pair + rec.right_pair:
            g = _gcd_of([s])
            if tuple(e // g for e in s.elements) in ((0, 1, 2), (0, 1, 3)):
                bad.add(s)
    kept = [s.elements for s in base if s not in bad]
    # every collision involves one of the dropped sets, so the rest is Sidon
    return is_sidon(Family.from_sets(kept, n=n - 1, k=3, zero_anchored=True))
