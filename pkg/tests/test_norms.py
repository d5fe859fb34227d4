import numpy as np
import pytest

from sqglab.errors import QuadratureBudgetError
from sqglab.fields import SpectralField, dealias
from sqglab.grid import Grid2D
from sqglab.norms import (WindowFamily, classical_holder_norm, sobolev_norm,
                          uniformly_local_norm, window_profile, zygmund_norm)

from conftest import random_real_field


class TestZygmund:
    def test_constant(self, grid64):
        c = 2.3
        f = SpectralField.from_values(grid64, np.full((64, 64), c))
        rep = zygmund_norm(f, 2.0)
        assert rep.value == pytest.approx(2.0**-2 * c, rel=1e-12)

    def test_pure_mode(self, grid64):
        X, _ = grid64.coords()
        f = SpectralField.from_values(grid64, 1.7 * np.cos(X))
        for r in (0.5, 1.5, 3.0):
            assert zygmund_norm(f, r).value == pytest.approx(1.7, rel=1e-12)

    def test_dominated_by_classical_for_noninteger_r(self, grid128):
        # C^r and the classical norm are equivalent for non-integer r
        ratios = []
        for seed in range(6):
            f = dealias(random_real_field(grid128, seed=seed))
            f = f * (1.0 / f.linf())
            ratios.append(zygmund_norm(f, 1.5).value / classical_holder_norm(f, 1.5).value)
        assert max(ratios) <= 2.0  # stable O(1) comparison constant

    def test_block_profile_monotonicity(self, grid128):
        # per block: 2^(j r) weight grows with r for j >= 0
        f = random_real_field(grid128, seed=3)
        lo = zygmund_norm(f, 1.0)
        hi = zygmund_norm(f, 2.0)
        for j, v in lo.block_profile.items():
            if j >= 0:
                assert v <= hi.block_profile[j] * (1 + 1e-12)

    def test_homogeneity(self, grid64):
        f = random_real_field(grid64, seed=4)
        a = zygmund_norm(f, 1.2).value
        b = zygmund_norm(f * 3.0, 1.2).value
        assert b == pytest.approx(3.0 * a, rel=1e-12)

    def test_zero_iff_zero(self, grid64):
        z = SpectralField.zeros(grid64)
        assert zygmund_norm(z, 1.5).value == 0.0


class TestClassicalHolder:
    def test_constant(self, grid64):
        f = SpectralField.from_values(grid64, np.full((64, 64), -2.3))
        assert classical_holder_norm(f, 1.5).value == pytest.approx(2.3, rel=1e-12)

    def test_sin_seminorm_against_dense_oracle(self, grid128):
        # 1-D analytic oracle by dense search over separations <= 1
        X, _ = grid128.coords()
        f = SpectralField.from_values(grid128, np.sin(X))
        rep = classical_holder_norm(f, 1.5)
        a = np.linspace(0, 2 * np.pi, 4001)
        oracle = 0.0
        for d in np.linspace(1e-3, 1.0, 1500):
            oracle = max(oracle, np.abs(np.cos(a + d) - np.cos(a)).max() / np.sqrt(d))
        near = rep.extras["semi_near(1, 0)"]
        assert near == pytest.approx(oracle, rel=0.02)
        # full value: |f| + |d1 f| + |d2 f| + seminorm terms (far bound included)
        expected = 1.0 + 1.0 + 0.0 + (near + 2.0) + 0.0
        assert rep.value == pytest.approx(expected, rel=1e-9)

    def test_scaling(self, grid64):
        f = random_real_field(grid64, seed=5)
        v1 = classical_holder_norm(f, 1.5, pair_budget=512).value
        v2 = classical_holder_norm(f * 4.0, 1.5, pair_budget=512).value
        assert v2 == pytest.approx(4.0 * v1, rel=1e-12)

    def test_integer_order_has_no_seminorm(self, grid64):
        f = random_real_field(grid64, seed=6)
        rep = classical_holder_norm(f, 1.0)
        assert not any(k.startswith("semi") for k in rep.block_profile)


class TestSobolev:
    def test_single_mode_exact_value(self):
        # ||J^2 sin(x1)||_L2 on the 2pi box: (1+1)^1 * pi*sqrt(2) = 2 pi sqrt(2)
        g = Grid2D(64, 2 * np.pi)
        X, _ = g.coords()
        f = SpectralField.from_values(g, np.sin(X))
        rep = sobolev_norm(f, 2.0)
        assert rep.value == pytest.approx(2.0 * np.pi * np.sqrt(2.0), rel=1e-12)

    def test_homogeneous_s0_is_l2(self, grid64):
        f = random_real_field(grid64, seed=7)
        f = SpectralField.from_values(grid64, f.values - f.values.mean())
        assert sobolev_norm(f, 0.0, homogeneous=True).value == pytest.approx(f.l2(), rel=1e-12)

    def test_block_variant_equivalent(self, grid128):
        ratios = []
        for seed in range(8):
            f = random_real_field(grid128, seed=seed)
            rep = sobolev_norm(f, 1.5)
            ratios.append(rep.extras["lp_block_variant"] / rep.value)
        assert 0.3 <= min(ratios) and max(ratios) <= 3.0
        assert max(ratios) / min(ratios) <= 1.5  # tight on a fixed ensemble

    def test_triangle_inequality(self, grid64):
        f = random_real_field(grid64, seed=8)
        g = random_real_field(grid64, seed=9)
        s = 1.7
        lhs = sobolev_norm(f + g, s).value
        rhs = sobolev_norm(f, s).value + sobolev_norm(g, s).value
        assert lhs <= rhs * (1 + 1e-12)


class TestWindows:
    def test_covering(self, grid128):
        wf = WindowFamily.build(grid128)
        assert wf.covering_radius() <= wf.scale

    def test_profile_smoothness(self, grid128):
        wf = WindowFamily.build(grid128)
        assert np.isfinite(wf.profile_fd_bound(order=4))

    def test_profile_shape(self):
        rho = np.linspace(0, 3, 301)
        p = window_profile(rho)
        assert np.all(p[rho <= 1.0] == 1.0)
        assert np.all(p[rho >= 2.0] == 0.0)
        assert np.all(np.diff(p) <= 1e-12)  # monotone on the transition


class TestUniformlyLocal:
    def test_constant_l2ul(self, grid64):
        c = 1.9
        f = SpectralField.from_values(grid64, np.full((64, 64), c))
        wf = WindowFamily.build(grid64)
        rep = uniformly_local_norm(f, 2.0, wf, "Lp_ul")
        x1, x2 = grid64.coords_centered()
        wnorm = np.sqrt(np.sum(window_profile(np.hypot(x1, x2)) ** 2) * grid64.spacing**2)
        assert rep.value == pytest.approx(c * wnorm, rel=1e-10)
        vals = list(rep.block_profile.values())
        assert max(vals) - min(vals) <= 1e-10 * max(vals)  # translation invariance

    def test_linf_window(self, grid64):
        f = random_real_field(grid64, seed=10)
        wf = WindowFamily.build(grid64)
        rep = uniformly_local_norm(f, np.inf, wf, "Lp_ul")
        assert rep.value == pytest.approx(f.linf(), rel=1e-9)

    def test_window_scale_equivalence(self, grid128):
        wf1 = WindowFamily.build(grid128)
        wf2 = WindowFamily.build(grid128, scale=2.0)
        ratios = []
        for seed in range(6):
            f = random_real_field(grid128, seed=seed)
            a = uniformly_local_norm(f, 1.5, wf1, "Hs_ul").value
            b = uniformly_local_norm(f, 1.5, wf2, "Hs_ul").value
            ratios.append(b / a)
        assert 0.5 <= min(ratios) and max(ratios) <= 2.5
        assert max(ratios) / min(ratios) <= 1.6

    def test_slobodeckij_matches_bessel_bracket(self):
        grid = Grid2D(64)
        wf = WindowFamily.build(grid)
        s = 2.5
        t = np.linspace(0, 50, 100001)
        sym = (1 + t**4 + t ** (2 * s)) / (1 + t**2) ** s
        c1, c2 = sym.min(), sym.max()
        for seed in (0, 1, 2):
            f = dealias(random_real_field(grid, seed=seed))
            hs = uniformly_local_norm(f, s, wf, "Hs_ul").value
            ws = uniformly_local_norm(f, s, wf, "Ws2_ul").value
            ratio_sq = (ws / hs) ** 2
            assert c1 * 0.9 <= ratio_sq <= c2 * 1.1

    def test_quadrature_budget_refusal(self):
        grid = Grid2D(256)
        f = random_real_field(grid, seed=1)
        wf = WindowFamily.build(grid)
        with pytest.raises(QuadratureBudgetError):
            uniformly_local_norm(f, 2.5, wf, "Ws2_ul")

    def test_triangle_inequality(self, grid64):
        wf = WindowFamily.build(grid64)
        f = random_real_field(grid64, seed=11)
        g = random_real_field(grid64, seed=12)
        lhs = uniformly_local_norm(f + g, 1.5, wf, "Hs_ul").value
        rhs = (uniformly_local_norm(f, 1.5, wf, "Hs_ul").value
               + uniformly_local_norm(g, 1.5, wf, "Hs_ul").value)
        assert lhs <= rhs * (1 + 1e-9)

    def test_homogeneity(self, grid64):
        wf = WindowFamily.build(grid64)
        f = random_real_field(grid64, seed=13)
        a = uniformly_local_norm(f, 2.0, wf, "Hs_ul").value
        b = uniformly_local_norm(f * 2.5, 2.0, wf, "Hs_ul").value
        assert b == pytest.approx(2.5 * a, rel=1e-10)


class TestSobolevEmbedding:
    def test_holder_controlled_by_hsul(self):
        # ||f||_C~1 <= C ||f||_(H^(1+s)_ul), s = 1.1 > d/2, C stable across grids
        cs = {}
        for n in (64, 128):
            grid = Grid2D(n)
            wf = WindowFamily.build(grid)
            vals = []
            for seed in range(5):
                f = dealias(random_real_field(grid, seed=seed))
                lhs = classical_holder_norm(f, 1.0).value
                rhs = uniformly_local_norm(f, 2.1, wf, "Hs_ul").value
                vals.append(lhs / rhs)
            cs[n] = max(vals)
        assert cs[128] <= 20.0
        assert abs(cs[128] - cs[64]) / cs[64] <= 0.5
