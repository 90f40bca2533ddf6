"""Ground truth at small sizes: exact F_k(N), the complete list of sumset
equalities among 3-sets containing 0, and exact violation counts.

Run: python demos/03_exhaustive_oracles.py
"""
# %%
from sidonkit.oracle import (classify_3set_equalities, count_c_ell_all, count_c_prime,
                             enumerate_3set_equalities, exact_fk, load_equality_families)

for n in range(3, 8):
    r = exact_fk(n, 2)
    print(f"F_2({n}) = {r.value}  (2n-3 = {2 * n - 3}, {r.search_stats['nodes']} nodes)")
r = exact_fk(6, 3)
print("F_3(6) =", r.value, "witness:", [s.elements for s in r.witness])

# %%
# Every equality X + Y = V + W among 3-sets of {0..n} containing 0 is a
# dilation of one of ten base equalities.
for fam in load_equality_families():
    x, y, v, w = fam.base_quadruple
    print(f"{fam.id:2d}: {x}+{y} = {v}+{w} = {list(fam.base_sumset.sums)}")

for n in (10, 20, 40):
    recs = enumerate_3set_equalities(n)
    c = classify_3set_equalities(recs)
    print(f"n={n}: {len(recs)} equalities, {len(c.unclassified)} unclassified, "
          f"{len(c.bridged)} pair two base equalities with the same sumset")

# %%
# Violating pairs-of-pairs among all 2-subsets of [n], by number of distinct sets.
print(" n   C(2)  C(3)   C(4)   C'")
for n in range(4, 11):
    c = count_c_ell_all(n, 2)
    print(f"{n:2d} {c[2]:5d} {c[3]:5d} {c[4]:6d} {count_c_prime(n, 2):5d}")
