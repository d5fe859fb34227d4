"""Fractional multipliers and the constitutive velocity map on plane waves.

Run:  python demos/02_multipliers_and_constitutive.py
"""
import numpy as np

from sqglab import Grid2D, SpectralField, apply_multiplier, biot_savart_velocity
from sqglab.multipliers import bessel, divergence, frac_laplacian

grid = Grid2D(128)
X, Y = grid.coords()

# Plane waves are eigenfunctions: (-Lap)^(s/2) cos(kx) = |k|^s cos(kx).
for s in (0.5, 1.0, 1.7):
    f = SpectralField.from_values(grid, np.cos(2 * X))
    g = apply_multiplier(f, frac_laplacian(s))
    print(f"frac_laplacian({s}): max error {np.abs(g.values - 2**s * np.cos(2*X)).max():.2e}")

# Bessel potential leaves constants alone and weights modes by (1+|k|^2)^(s/2).
c = SpectralField.from_values(grid, np.full((128, 128), 3.0))
print("bessel(2.5) on constant:", apply_multiplier(c, bessel(2.5)).values.max())

# The velocity of a single mode: amplitude gain |k|^(beta-1), rotated by 90 deg.
beta = 0.5
theta = SpectralField.from_values(grid, np.cos(2 * X))
u = biot_savart_velocity(theta, beta)
expect = -(2.0 ** (beta - 1.0)) * np.sin(2 * X)
print(f"u2 error for cos(2x): {np.abs(u.values[1] - expect).max():.2e}")
print(f"u1 component (should be 0): {np.abs(u.values[0]).max():.2e}")
print(f"divergence of u: {divergence(u).linf():.2e}")

# Radial scalar: velocity follows level sets, transport term vanishes.
x1, x2 = grid.coords_centered()
rad = SpectralField.from_values(grid, np.exp(-(x1**2 + x2**2) / (2 * 0.1**2)))
ur = biot_savart_velocity(rad, beta)
from sqglab.multipliers import gradient
gt = gradient(rad)
adv = ur.values[0] * gt.values[0] + ur.values[1] * gt.values[1]
print(f"radial u.grad(theta) residual: {np.abs(adv).max() / rad.linf():.2e}")
