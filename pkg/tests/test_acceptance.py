"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (the lines are repeated in the
terminal summary) or directly with ``python tests/test_acceptance.py``.
"""

import math
import random
import time
from itertools import combinations

import numpy as np

import naive
from sidonkit import Family, is_bhg, is_sidon, representation_count, sumset, upper_bound_fk
from sidonkit.constructions import (base_b2g_set, block_intervals, construct_b2g, construct_k2,
                                    construct_k3, construct_k4, decode_k4_sumset,
                                    erdos_turan_sidon, zero_anchored_sidon_system)
from sidonkit.oracle import (classify_3set_equalities, composite_multirep, count_c_ell_all,
                             enumerate_3set_equalities, exact_fk)
from sidonkit.randomsim import (GridSpec, SampleSpec, estimate_bh_probability,
                                expected_collision_diagnostics, threshold_sweep)
from sidonkit.verifier import find_collisions

try:
    from conftest import record_acceptance
except ImportError:  # run as a script
    def record_acceptance(line):
        pass


def report(number, ok, detail):
    line = f"ACCEPTANCE criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(line)
    record_acceptance(line)
    assert ok, line


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


# 1 -------------------------------------------------------------------------------

def test_criterion_01_exact_tightness_k2():
    problems = []
    worst = 0.0
    for n in (3, 4, 5, 6, 7):
        with Timer() as t:
            r = exact_fk(n, 2)
        worst = max(worst, t.elapsed)
        if r.value != 2 * n - 3 or t.elapsed > 60:
            problems.append(f"exact_fk({n},2)={r.value} in {t.elapsed:.1f}s")
    for n in (3, 4, 10, 100, 1000):
        f = construct_k2(n)
        if len(f) != 2 * n - 3 or not is_sidon(f):
            problems.append(f"construct_k2({n})")
    f = construct_k2(10_000)
    with Timer() as t:
        ok = is_sidon(f)
    if not ok or len(f) != 2 * 10_000 - 3 or t.elapsed > 60:
        problems.append(f"construct_k2(10^4): sidon={ok}, size={len(f)}, {t.elapsed:.1f}s")
    report(1, not problems,
           f"exact_fk(n,2)=2n-3 for n=3..7 (slowest {worst:.2f}s); "
           f"construct_k2(10^4) verified in {t.elapsed:.1f}s" + (f"; {problems}" if problems else ""))


# 2 -------------------------------------------------------------------------------

def test_criterion_02_upper_bound():
    checked, bad = 0, []
    for n, k in [(3, 2), (4, 2), (5, 2), (6, 2), (7, 2), (4, 3), (5, 3), (6, 3), (5, 4), (6, 4)]:
        r = exact_fk(n, k)
        checked += 1
        if not is_sidon(r.witness) or len(r.witness) != r.value or r.value > upper_bound_fk(n, k):
            bad.append(("exact", n, k))
    families = [(n, 2, construct_k2(n)) for n in (3, 10, 50, 500)]
    families += [(n, 3, construct_k3(n)) for n in range(5, 41)]
    for k in (3, 4, 5):
        top = erdos_turan_sidon(k).top
        families += [(m * (top + 1), k, construct_k4(m * (top + 1), k)) for m in (2, 4, 8)]
    for m, k in [(20, 2), (20, 3), (100, 4)]:
        z = zero_anchored_sidon_system(m, k)
        families.append((m + 1, k, z.shifted(1)))
    for n, k, f in families:
        checked += 1
        if is_sidon(f) and len(f) > upper_bound_fk(n, k):
            bad.append(("construction", n, k, len(f)))
        if not is_sidon(f):
            bad.append(("not sidon", n, k))
    report(2, not bad, f"{checked} witnesses/constructions within C(n-1,k-1)+n-k" +
           (f"; violations {bad}" if bad else ""))


# 3 -------------------------------------------------------------------------------

def test_criterion_03_k3_construction():
    bad = []
    with Timer() as t:
        for n in range(5, 41):
            f = construct_k3(n)
            need = math.comb(n - 1, 2) - math.ceil(5 * n / 6)
            if not is_sidon(f) or len(f) < need:
                bad.append((n, len(f), need))
    ok = not bad and t.elapsed <= 300
    report(3, ok, f"construct_k3(n) Sidon and large for n=5..40 in {t.elapsed:.1f}s" +
           (f"; failures {bad}" if bad else ""))


# 4 -------------------------------------------------------------------------------

def test_criterion_04_classification():
    ns = list(range(5, 41))
    counts, unclassified = [], 0
    with Timer() as t:
        for n in ns:
            recs = enumerate_3set_equalities(n)
            unclassified += len(classify_3set_equalities(recs).unclassified)
            counts.append(len(recs))
    slope, intercept = np.polyfit(ns, counts, 1)
    resid = [abs(c - (intercept + slope * n)) / c for n, c in zip(ns, counts) if n >= 20]
    ok = unclassified == 0 and max(resid) <= 0.20 and t.elapsed <= 600
    report(4, ok, f"0 unclassified = {unclassified == 0}; count ~ {slope:.2f} n + {intercept:.1f}, "
           f"max relative residual (n>=20) {max(resid):.3f}; {t.elapsed:.1f}s")


# 5 -------------------------------------------------------------------------------

def test_criterion_05_interval_construction():
    rng = random.Random(20240501)
    bad = []
    with Timer() as t:
        for k in (3, 4, 5):
            base = erdos_turan_sidon(k)
            d = base.top + 1
            for n in (4 * d, 8 * d):
                f = construct_k4(n, k, base)
                if len(f) < (n // (2 * d)) ** (k - 1) or not is_sidon(f):
                    bad.append(("size/sidon", k, n))
                ivs = block_intervals(n, base)
                sets = list(f)
                for _ in range(1000):
                    u, v = sorted((rng.choice(sets), rng.choice(sets)))
                    try:
                        got = decode_k4_sumset(sumset(u, v).sums, ivs)
                    except ValueError:
                        got = None
                    if got != (u.elements, v.elements):
                        bad.append(("decode", k, n, u, v))
                        break
    ok = not bad and t.elapsed <= 300
    report(5, ok, f"k=3,4,5 at n=4(a+1),8(a+1): Sidon, size bound, 1000/1000 pairs decoded; "
           f"{t.elapsed:.1f}s" + (f"; failures {bad[:3]}" if bad else ""))


# 6 -------------------------------------------------------------------------------

def test_criterion_06_oracle_cross_validation():
    rng = random.Random(6)
    mismatches = 0
    with_collisions = 0
    for _ in range(100):
        k = rng.choice([2, 3])
        n = rng.randint(k + 2, 10)
        pool = list(combinations(range(1, n + 1), k))
        sets = rng.sample(pool, min(len(pool), rng.randint(1, 25)))
        f = Family.from_sets(sets, n=n, k=k)
        got = sorted((tuple(s.elements for s in r.left_pair), tuple(s.elements for s in r.right_pair))
                     for r in find_collisions(f))
        expected = naive.canonical_collisions(sets)
        with_collisions += bool(expected)
        mismatches += got != expected
    count_bad = [n for n in range(2, 13)
                 if count_c_ell_all(n, 2) != naive.counts_by_ell(list(combinations(range(1, n + 1), 2)))]
    ok = mismatches == 0 and not count_bad
    report(6, ok, f"100 random families ({with_collisions} with violations): {mismatches} mismatches; "
           f"count_c_ell k=2 n<=12 bucketed vs naive mismatches: {count_bad}")


# 7 -------------------------------------------------------------------------------

def test_criterion_07_threshold_slope():
    grid = GridSpec(0.1, 10.0, 13)
    with Timer() as t:
        r2 = threshold_sweep([64, 128, 256, 512], 2, grid=grid, samples=400, seed=1)
        r3 = threshold_sweep([32, 64, 128], 3, grid=grid, samples=400, seed=1)
    ok2 = abs(r2.slope - (-1.25)) <= 0.20
    ok3 = abs(r3.slope - (-1.75)) <= 0.30
    ok = ok2 and ok3 and t.elapsed <= 900
    report(7, ok, f"k=2 slope {r2.slope:.3f} (target -1.25+-0.20), k=3 slope {r3.slope:.3f} "
           f"(target -1.75+-0.30), seed 1, 400 samples; {t.elapsed:.1f}s")


# 8 -------------------------------------------------------------------------------

def test_criterion_08_first_moment():
    parts, ok = [], True
    for p in (0.02, 0.05, 0.1):
        fm = expected_collision_diagnostics(10, 2, p, samples=10_000, seed=1)
        z = (fm.mean - fm.exact) / fm.sigma
        markov = fm.not_sidon_rate <= fm.mean + 3 * fm.sigma
        ok &= abs(z) <= 3 and markov
        parts.append(f"p={p}: E^={fm.mean:.4f} exact={fm.exact:.4f} z={z:+.2f}, "
                     f"Pr(not Sidon)={fm.not_sidon_rate:.4f}")
    report(8, ok, "; ".join(parts))


# 9 -------------------------------------------------------------------------------

def test_criterion_09_b2g():
    parts, ok = [], True
    for k, g, n in [(2, 2, 40), (2, 4, 60), (3, 2, 40)]:
        f = construct_b2g(n, k, g)
        a = base_b2g_set(n // 2, g // 2)
        inner = zero_anchored_sidon_system(n // 2, k)
        good = is_bhg(f, 2, g) and len(f) >= 1 and len(f) == len(a) * len(inner)
        ok &= good
        parts.append(f"(k={k},g={g},n={n}): |F|={len(f)}=|A|{len(a)}*|I|{len(inner)} B2[g]={good}")
    report(9, ok, "; ".join(parts))


# 10 ------------------------------------------------------------------------------

def test_criterion_10_composite():
    s, pairings = composite_multirep([1, 2, 4, 8])
    six = Family.from_sets([x.elements for f in pairings for x in f], n=s.max, k=4,
                           zero_anchored=True)
    count = representation_count(six, s, 2)
    report(10, count == 3, f"parts 1,2,4,8: |S|={len(s)}, representation_count={count}")


# 11 ------------------------------------------------------------------------------

def test_criterion_11_bh_zero_statement():
    parts, ok = [], True
    with Timer() as t:
        for n in (32, 64):
            p = 10 * n ** (-7 / 5)
            pt = estimate_bh_probability(SampleSpec(n, 2, p, h=3, seed=1, samples=400),
                                         count=False)
            ok &= pt.p_hat <= 0.2
            parts.append(f"n={n}: p_hat={pt.p_hat:.3f}")
    ok &= t.elapsed <= 600
    report(11, ok, "; ".join(parts) + f" (h=3, k=2, p=10 n^-7/5); {t.elapsed:.1f}s")


if __name__ == "__main__":
    import sys

    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
