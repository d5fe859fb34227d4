"""The norm estimators side by side, with the equivalences they satisfy.

Run:  python demos/03_norms_tour.py
"""
import numpy as np

from sqglab import Grid2D, classical_holder_norm, sobolev_norm, uniformly_local_norm, zygmund_norm
from sqglab.norms import WindowFamily
from sqglab.verify import EnsembleSpec, make_field

grid = Grid2D(128)
f = make_field(grid, EnsembleSpec(seed=11), trial=0)
windows = WindowFamily.build(grid)

print("field: band-limited random, power-law spectrum, |f|_inf = 1\n")

r, s = 1.5, 2.5
zy = zygmund_norm(f, r)
ho = classical_holder_norm(f, r)
print(f"Zygmund C^{r}:          {zy.value:.4f}   (block profile peaks at j={max(zy.block_profile, key=zy.block_profile.get)})")
print(f"classical Holder C^{r}: {ho.value:.4f}   (upper-bound estimator)")

so = sobolev_norm(f, s)
print(f"H^{s} multiplier route:  {so.value:.4f}")
print(f"H^{s} dyadic block sum:  {so.extras['lp_block_variant']:.4f}  "
      f"(equivalent norm, ratio {so.extras['lp_block_variant']/so.value:.3f})")

ul = uniformly_local_norm(f, s, windows, "Hs_ul")
print(f"H^{s}_ul (sup over {windows.n_centers} windows): {ul.value:.4f}")

# Window-scale robustness: lambda = 1 vs lambda = 2 give equivalent norms.
w2 = WindowFamily.build(grid, scale=2.0)
ul2 = uniformly_local_norm(f, s, w2, "Hs_ul")
print(f"H^{s}_ul at window scale 2:  {ul2.value:.4f}  (ratio {ul2.value/ul.value:.3f})")

# Slobodeckij route agrees with the Bessel route within the symbol bracket.
g64 = Grid2D(64)
f64 = make_field(g64, EnsembleSpec(seed=11), trial=0)
w64 = WindowFamily.build(g64)
hs = uniformly_local_norm(f64, s, w64, "Hs_ul")
ws = uniformly_local_norm(f64, s, w64, "Ws2_ul")
t = np.linspace(0, 40, 100001)
bracket = (1 + t**4 + t**5) / (1 + t**2) ** 2.5
print(f"\nn=64:  W^(s,2)_ul/H^s_ul squared ratio {(ws.value/hs.value)**2:.3f} "
      f"inside symbol bracket [{bracket.min():.3f}, {bracket.max():.3f}]")
