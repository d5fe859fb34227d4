"""Inequalities as measured-constant checks: a quick pass over the suite.

Run:  python demos/07_verification_suite.py
"""
import numpy as np

from sqglab import EnsembleSpec, check_commutators, check_multiplier_bounds, check_velocity_regularity

ens = EnsembleSpec(count=16, seed=7)

print("dyadic multiplier bounds (normalized ratios; ideal value 1):")
for variant, params in [
    ("bernstein", {"ps": (2.0, np.inf)}),
    ("lemma_3_1", {"ps": (2.0, np.inf), "s_values": (0.3, 0.7)}),
    ("lemma_A_2", {"ps": (2.0, np.inf), "betas": (0.25, 0.5, 0.75)}),
]:
    rep = check_multiplier_bounds(variant, params, ens, n_sides=(128, 256))
    print(" ", rep.summary_line())

print("\ncommutator estimates (measured constants):")
for variant in ("kato_ponce", "holder_commutator"):
    rep = check_commutators(variant, {"s": 2.5, "r": 1.5, "beta": 0.5}, ens,
                            n_sides=(128,))
    print(" ", rep.summary_line())

print("\nvelocity regularity (measured constants):")
rep = check_velocity_regularity("lemma_A_3", {"beta": 0.5, "r": 1.5}, ens, n_sides=(128, 256))
print(" ", rep.summary_line())
rep = check_velocity_regularity("embedding", {"s": 1.1, "j": 1}, ens, n_sides=(128, 256))
print(" ", rep.summary_line())
