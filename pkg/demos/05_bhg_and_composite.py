"""B_2[g] systems, and a sumset of 4-sets with three representations.

Run: python demos/05_bhg_and_composite.py
"""
# %%
from sidonkit import is_bhg
from sidonkit.constructions import base_b2g_set, construct_b2g
from sidonkit.oracle import composite_multirep
from sidonkit.verifier import max_representation_count

for n, k, g in [(40, 2, 2), (60, 2, 4), (40, 3, 2)]:
    f = construct_b2g(n, k, g)
    a = base_b2g_set(n // 2, g // 2)
    print(f"n={n} k={k} g={g}: A={a} |F|={len(f)}, B_2[{g}]: {is_bhg(f, 2, g)}, "
          f"max representations {max_representation_count(f, 2)}")

# %%
# {0,1}+{0,2}+{0,4}+{0,8} = {0..15} splits into two 4-sets in three ways.
s, pairings = composite_multirep([1, 2, 4, 8])
print("S =", s.sums)
for f in pairings:
    print("  ", " + ".join(str(x) for x in f))
