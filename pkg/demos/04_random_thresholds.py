"""Random systems: keep every k-subset of [n] with probability p and ask how
likely the result is Sidon. The half-probability point scales like
n^(-(2k+1)/4).

Run: python demos/04_random_thresholds.py   (about a minute)
"""
# %%
from sidonkit.randomsim import (GridSpec, SampleSpec, estimate_sidon_probability,
                                expected_collision_diagnostics, threshold_sweep)

n = 64
for c in (0.1, 1.0, 10.0):
    pt = estimate_sidon_probability(SampleSpec(n, 2, c * n ** -1.25, seed=1, samples=300))
    print(f"p = {c:4} n^-5/4: Pr(Sidon) ~ {pt.p_hat:.3f} +- {pt.ci_half_width:.3f}, "
          f"mean violations {pt.mean_collisions:.2f}")

# %%
# First moment: the Monte Carlo mean number of violations against the exact
# expectation computed from the violation counts.
for p in (0.02, 0.05, 0.1):
    fm = expected_collision_diagnostics(10, 2, p, samples=5000, seed=1)
    print(f"p={p}: mean {fm.mean:.4f} +- {fm.sigma:.4f}, exact {fm.exact:.4f}")

# %%
res = threshold_sweep([64, 128, 256], 2, grid=GridSpec(0.1, 10, 11), samples=200, seed=1)
for c in res.crossings:
    print(f"n={c.n}: p_half = {c.p_half:.3e}")
print(f"fitted slope {res.slope:.3f}  (theory {-res.exponent})")
