import json
import random
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

import naive
from sidonkit import (CollisionRecord, Family, find_collisions, is_bhg, is_sidon,
                      representation_count, sumset, translate_classes, upper_bound_fk)
from sidonkit.verifier import (collision_buckets, count_collisions, first_collision,
                               max_representation_count, translate_class_conflicts,
                               translate_classes_disjoint)

K2_MAX_N5 = [(1, 2), (1, 3), (1, 4), (1, 5), (4, 5), (3, 5), (2, 5)]
BAD3 = [(2, 3, 4), (2, 3, 5), (2, 4, 5)]  # 1 + {0,1,2}, 1 + {0,1,3}, 1 + {0,2,3}


def fam(sets, **kw):
    return Family.from_sets(sets, **kw)


def random_family(rng, k, n, m):
    pool = list(combinations(range(1, n + 1), k))
    return fam(rng.sample(pool, min(m, len(pool))), n=n, k=k)


def as_tuples(records):
    return sorted(
        (tuple(s.elements for s in r.left_pair), tuple(s.elements for s in r.right_pair))
        for r in records)


# --- Family ---------------------------------------------------------------------

def test_family_validation():
    with pytest.raises(ValueError):
        fam([(1, 2), (1, 2)])
    with pytest.raises(ValueError):
        fam([(1, 2), (1, 2, 3)], k=2)
    with pytest.raises(ValueError):
        fam([(0, 2)], n=4, k=2, zero_anchored=False)
    with pytest.raises(ValueError):
        fam([(1, 7)], n=5, k=2)
    f = fam([(3, 4), (1, 2)])
    assert [s.elements for s in f] == [(1, 2), (3, 4)]
    assert (1, 2) in f and (2, 3) not in f


# --- is_sidon / find_collisions ----------------------------------------------------

def test_is_sidon_examples():
    assert is_sidon(fam(K2_MAX_N5, n=5))
    assert is_sidon(fam([(0, 1, 3)]))
    assert not is_sidon(fam(BAD3))
    assert is_sidon(Family((), 5, 2))


def test_find_collisions_examples():
    recs = find_collisions(fam(BAD3))
    assert len(recs) == 1
    r = recs[0]
    assert r.ell == 3
    assert sumset(*r.left_pair) == sumset(*r.right_pair) == r.key
    assert find_collisions(fam(K2_MAX_N5, n=5)) == []
    everything = list(combinations(range(1, 6), 2))
    assert as_tuples(find_collisions(fam(everything))) == naive.canonical_collisions(everything)


def test_first_collision_is_a_real_collision():
    rec = first_collision(fam(BAD3))
    assert rec is not None and sumset(*rec.left_pair) == sumset(*rec.right_pair)


def test_collision_records_are_canonical():
    rng = random.Random(5)
    for _ in range(20):
        f = random_family(rng, 3, 9, 20)
        for r in find_collisions(f):
            a1, a2 = r.left_pair
            b1, b2 = r.right_pair
            assert a1 <= a2 and b1 <= b2
            assert (a1.elements, a2.elements) < (b1.elements, b2.elements)
            assert r.ell == len({a1, a2, b1, b2})
            assert 2 <= r.ell <= 4


def test_find_collisions_matches_naive_on_random_families():
    rng = random.Random(11)
    for trial in range(60):
        k = rng.choice([2, 3])
        n = rng.randint(k + 2, 10)
        f = random_family(rng, k, n, rng.randint(1, 25))
        sets = [s.elements for s in f]
        expected = naive.canonical_collisions(sets)
        assert as_tuples(find_collisions(f)) == expected
        assert is_sidon(f) == (not expected) == naive.is_sidon(sets)
        assert count_collisions(f) == len(expected)


@given(st.sets(st.tuples(st.integers(1, 6), st.integers(1, 6)).filter(lambda t: t[0] < t[1]),
               max_size=15))
def test_sidon_agreement_k2(pairs):
    f = fam(pairs, n=6, k=2) if pairs else Family((), 6, 2)
    assert is_sidon(f) == (not find_collisions(f)) == is_bhg(f, 2, 1)
    assert is_sidon(f) == naive.is_sidon(pairs)


def test_exhaustive_k2_n5_subfamilies_agree():
    pool = list(combinations(range(1, 6), 2))
    rng = random.Random(2)
    for _ in range(300):
        sub = rng.sample(pool, rng.randint(1, len(pool)))
        f = fam(sub, n=5, k=2)
        assert is_sidon(f) == naive.is_sidon(sub) == is_bhg(f, 2, 1)


def test_sidon_families_respect_upper_bound():
    rng = random.Random(3)
    for _ in range(200):
        n = rng.randint(4, 7)
        f = random_family(rng, 2, n, rng.randint(1, 12))
        if is_sidon(f):
            assert len(f) <= upper_bound_fk(n, 2)


def test_translation_and_dilation_invariance():
    rng = random.Random(4)
    for _ in range(30):
        f = random_family(rng, 3, 8, 15)
        ells = sorted(r.ell for r in find_collisions(f))
        g = f.shifted(5)
        assert is_sidon(g) == is_sidon(f)
        assert sorted(r.ell for r in find_collisions(g)) == ells
        d = fam([tuple(3 * x for x in s.elements) for s in f], n=3 * f.n, k=3)
        assert is_sidon(d) == is_sidon(f)


def test_large_bucket_scan_uses_exact_confirmation():
    # many sets sharing a minimum: one bucket holds thousands of pairs
    f = fam([(1, x) for x in range(2, 3000)])
    assert is_sidon(f)
    # a maximum-size Sidon family plus one more set cannot be Sidon
    n = 300
    sets = [(1, 1 + i) for i in range(1, n)] + [(n - i, n) for i in range(1, n - 1)]
    g = fam(sets + [(150, 151)], n=n)
    assert not is_sidon(g)
    assert not naive.is_sidon([s.elements for s in g])


# --- JSON -----------------------------------------------------------------------

def test_collision_json_round_trip():
    r = find_collisions(fam(BAD3))[0]
    line = r.to_json()
    assert json.loads(line) == {"left": [[2, 3, 4], [2, 3, 5]], "right": [[2, 3, 4], [2, 4, 5]],
                                "key": [4, 5, 6, 7, 8, 9], "ell": 3}
    assert CollisionRecord.from_json(line) == r


# --- representation counts / B_h[g] --------------------------------------------------

def test_representation_count_examples():
    f = fam([(0, 1, 2), (0, 2, 5), (0, 3, 5)])
    assert representation_count(f, tuple(range(8)), 2) == 2
    assert representation_count(f, (0, 100), 2) == 0
    with pytest.raises(ValueError):
        representation_count(f, (0, 1), 1)


def test_is_bhg_examples():
    f = fam(BAD3)
    assert not is_bhg(f, 2, 1)
    assert is_bhg(f, 2, 2)
    assert is_bhg(fam(K2_MAX_N5, n=5), 2, 1)
    with pytest.raises(ValueError):
        is_bhg(f, 1, 1)


@pytest.mark.parametrize("h", [2, 3])
def test_bhg_matches_naive(h):
    rng = random.Random(8 + h)
    for _ in range(25):
        f = random_family(rng, 2, 7, rng.randint(2, 10))
        reps = naive.h_representations([s.elements for s in f], h)
        worst = max(reps.values())
        assert max_representation_count(f, h) == worst
        for g in (1, 2, 3):
            assert is_bhg(f, h, g) == (worst <= g)
        key, count = max(reps.items(), key=lambda kv: kv[1])
        assert representation_count(f, sorted(key), h) == count


# --- bounds -----------------------------------------------------------------------

def test_upper_bound_examples():
    assert upper_bound_fk(5, 2) == 7
    assert upper_bound_fk(6, 3) == 13
    assert upper_bound_fk(10, 4) == 90
    for n, k in [(3, 3), (5, 1), (4, 6)]:
        with pytest.raises(ValueError):
            upper_bound_fk(n, k)


# --- translate classes ----------------------------------------------------------------

def test_translate_classes_of_extremal_k2_family():
    classes = translate_classes(fam(K2_MAX_N5, n=5))
    assert classes == {(1,): (1, 4), (2,): (1, 3), (3,): (1, 2), (4,): (1,)}
    assert sum(len(v) for v in classes.values()) == 7
    assert translate_classes_disjoint(classes)
    assert translate_classes(Family((), 5, 2)) == {}


def test_translate_classes_disjoint_for_sidon_families():
    rng = random.Random(6)
    seen_sidon = 0
    for _ in range(200):
        f = random_family(rng, 3, 9, rng.randint(2, 12))
        classes = translate_classes(f)
        assert sum(len(v) for v in classes.values()) == len(f)
        if is_sidon(f):
            seen_sidon += 1
            assert translate_classes_disjoint(classes)
    assert seen_sidon > 10


def test_translate_conflict_from_cross_translates():
    # x + A, y + B, x' + A, y' + B with x' - x = y - y' collide
    a, b = (0, 1, 2), (0, 2, 5)
    x, x2, y, y2 = 1, 4, 4, 1
    sets = [tuple(x + e for e in a), tuple(x2 + e for e in a),
            tuple(y + e for e in b), tuple(y2 + e for e in b)]
    f = fam(sets, n=10)
    assert any(r.ell == 4 for r in find_collisions(f))
    classes = translate_classes(f)
    assert translate_class_conflicts(classes) == [((1, 2), (2, 5), 3)]
    assert not translate_classes_disjoint(classes)


def test_bucket_pairs_sorted():
    f = fam(list(combinations(range(1, 7), 2)))
    for key, pairs in collision_buckets(f):
        assert pairs == sorted(pairs)
        assert all(sumset(f.sets[i], f.sets[j]) == key for i, j in pairs)
