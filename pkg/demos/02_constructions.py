"""Large explicit Sidon systems for k = 2, 3 and k >= 3, checked against the
upper bound C(n-1, k-1) + n - k.

Run: python demos/02_constructions.py
"""
# %%
import math
import random

from sidonkit import is_sidon, sumset, upper_bound_fk
from sidonkit.constructions import (block_intervals, construct_k2, construct_k3, construct_k4,
                                    decode_k4_sumset, erdos_turan_sidon)

print(" n  k  size  bound  sidon")
for n in (5, 10, 50):
    f = construct_k2(n)
    print(f"{n:2d}  2  {len(f):4d}  {upper_bound_fk(n, 2):5d}  {is_sidon(f)}")

# %%
# For k = 3 we keep every set 1 + A with A a 3-set containing 0, unless A is
# a dilation of {0,1,2} or {0,1,3}; only about 5n/6 sets are lost.
for n in (10, 20, 40):
    f = construct_k3(n)
    print(f"{n:2d}  3  {len(f):4d}  {upper_bound_fk(n, 3):5d}  {is_sidon(f)}  "
          f"(C(n-1,2) = {math.comb(n - 1, 2)})")

# %%
# For general k the sets take one coordinate from each of k-1 intervals
# placed along a Sidon set, so the pair {U, V} can be read back off U + V.
base = erdos_turan_sidon(4)
print("Erdos-Turan base for k=4:", base.elements, "prime", base.prime_p)
n = 4 * (base.top + 1)
f = construct_k4(n, 4, base)
print(f"n={n}: {len(f)} sets, Sidon: {is_sidon(f)}")
ivs = block_intervals(n, base)
u, v = sorted(random.Random(0).sample(list(f), 2))
print("U =", u, "V =", v, "decoded:", decode_k4_sumset(sumset(u, v).sums, ivs))
