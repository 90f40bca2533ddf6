"""Sumsets of k-sets and checking the Sidon property of a family.

Run: python demos/01_sumsets_and_verification.py
"""
# %%
from sidonkit import Family, KSet, find_collisions, is_sidon, lex_compare, normalize, sumset

# Sumsets are sets: repeated sums collapse.
a, b = KSet((0, 1, 3)), KSet((0, 1, 5))
print("A + B =", sumset(a, b).sums)

# Every set is its minimum plus a distance set that starts at 0.
nf = normalize(KSet((3, 5, 9)))
print("normal form of {3,5,9}:", nf.base, "+", nf.distance_set)

# Lexicographic order compares the smallest element where two sets differ.
print("{1,2,4} vs {1,3,4}:", lex_compare(KSet((1, 2, 4)), KSet((1, 3, 4))))

# %%
# A family is Sidon when all sums A_i + A_j (i <= j) are different sets.
good = Family.from_sets([(1, 2), (1, 3), (1, 4), (1, 5), (4, 5), (3, 5), (2, 5)])
print("7 pairs in [5] Sidon?", is_sidon(good))

bad = Family.from_sets([(2, 3, 4), (2, 3, 5), (2, 4, 5)])
print("three 3-sets Sidon?", is_sidon(bad))
for rec in find_collisions(bad):
    print("  violation:", rec.left_pair, "vs", rec.right_pair, "-> sumset", rec.key.sums,
          "ell =", rec.ell)

# %%
# The same records serialise to JSON lines, as the CLI prints them.
print(find_collisions(bad)[0].to_json())
