"""Branch tracking, asymptotic classification, window validation, autoscale."""

import math

import numpy as np
import pytest

from diracflow.branches import (
    Branch,
    SweepConfig,
    autoscale,
    branch_points,
    classify_asymptotics,
    sweep_branches,
    validate_window,
)
from diracflow.bulk import HalfSpaceParams, landau_levels, predicted_sf
from diracflow.fiber import Grid1D, SpuriousFilter
from diracflow.flow import spectral_flow
from diracflow.presets import preset_profiles

from conftest import walls


def small_sweep(ps, zr=(-5.0, 5.0), window=(-3.5, 3.5), N=400, L=14.0, margin=4.0, samples=21):
    grid = Grid1D(L=L, N=N)
    cfg = SweepConfig(zr[0], zr[1], samples, window, refine_tol=0.15)
    f = SpuriousFilter(margin=margin, threshold=0.3)
    return grid, cfg, f, sweep_branches(grid, ps, cfg, f)


class TestSweepConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            SweepConfig(1.0, 1.0, 10, (-1.0, 1.0))
        with pytest.raises(ValueError):
            SweepConfig(-1.0, 1.0, 1, (-1.0, 1.0))
        with pytest.raises(ValueError):
            SweepConfig(-1.0, 1.0, 10, (1.0, -1.0))


class TestSweep:
    def test_constant_bulk_flat_branches(self):
        ps = preset_profiles("bulk_uniform")
        _, _, _, branches = small_sweep(ps, margin=5.0)
        assert branches
        for b in branches:
            if b.clipped:
                continue
            assert max(b.mus) - min(b.mus) <= 2e-2

    def test_mass_wall_single_zero_crossing(self):
        ps = preset_profiles("mass_wall")
        _, _, _, branches = small_sweep(ps, margin=5.0)
        crossing = [b for b in branches if min(b.mus) < 0.0 < max(b.mus)]
        assert len(crossing) == 1
        b = crossing[0]
        z = np.asarray(b.zetas)
        mu = np.asarray(b.mus)
        core = (mu > -1.0) & (mu < 1.0)
        assert np.all(np.diff(mu[core]) < 0) or np.all(np.diff(mu[core]) > 0)

    def test_massive_field_wall_gap_stays_empty(self):
        ps = preset_profiles("field_wall_massive")
        grid = Grid1D(L=14.0, N=400)
        cfg = SweepConfig(-5.0, 5.0, 21, (-0.5, 0.5))
        f = SpuriousFilter(margin=2.5, threshold=0.3)
        branches = sweep_branches(grid, ps, cfg, f)
        assert branches == []

    def test_lipschitz_in_zeta(self):
        ps = preset_profiles("dual_wall_v01")
        _, _, _, branches = small_sweep(ps)
        for b in branches:
            dz = np.abs(np.diff(b.zetas))
            dmu = np.abs(np.diff(b.mus))
            assert np.all(dmu <= dz + 5e-2)

    def test_discrete_simplicity(self):
        ps = preset_profiles("dual_wall_v01")
        _, _, _, branches = small_sweep(ps)
        seen = {}
        for i, b in enumerate(branches):
            for z, mu in zip(b.zetas, b.mus):
                for j, mu2 in seen.get(z, []):
                    if j != i:
                        assert abs(mu - mu2) > 1e-9
                seen.setdefault(z, []).append((i, mu))

    def test_branch_count_stable_under_halved_step(self):
        ps = preset_profiles("dual_wall_v01")
        window = (-1.5, 1.5)
        _, _, _, coarse = small_sweep(ps, window=window, samples=21)
        _, _, _, fine = small_sweep(ps, window=window, samples=41)

        def entering(branches):
            return sum(1 for b in branches if any(-1.0 < mu < 1.0 for mu in b.mus))

        assert entering(coarse) == entering(fine)

    def test_prefetch_identical(self):
        from diracflow.branches import _solve_retained

        ps = preset_profiles("mass_wall")
        grid = Grid1D(L=10.0, N=200)
        cfg = SweepConfig(-3.0, 3.0, 13, (-2.5, 2.5), refine_tol=0.15)
        f = SpuriousFilter(margin=2.5, threshold=0.3)
        plain = sweep_branches(grid, ps, cfg, f)
        pre = {
            z: _solve_retained(grid, ps, z, cfg.window, f)
            for z in np.linspace(cfg.zeta_min, cfg.zeta_max, cfg.samples)
        }
        seeded = sweep_branches(grid, ps, cfg, f, prefetch=pre)
        assert branch_points(plain) == branch_points(seeded)


class TestClassify:
    def test_field_wall_massless_endpoints(self):
        """Opposite-sign fields: branches reach bulk levels at zeta -> +inf and
        exit through the window edge (|mu| increasing) toward zeta -> -inf."""
        minus = HalfSpaceParams(-2.0, 0.0, 0.0)
        plus = HalfSpaceParams(2.0, 0.0, 0.0)
        ps = walls(minus, plus)
        _, cfg, _, branches = small_sweep(ps, zr=(-8.0, 8.0), N=600, L=18.0, samples=33)
        bulk = sorted(set(landau_levels(minus, 6).levels) | set(landau_levels(plus, 6).levels))
        at_hi = [b for b in branches if b.zetas[-1] == cfg.zeta_max]
        assert at_hi
        for b in at_hi:
            assert min(abs(b.mus[-1] - v) for v in bulk) < 5e-2
        lo, hi = cfg.window
        for b in branches:
            if b.zetas[0] > cfg.zeta_min:  # entered mid-sweep through the edge
                assert min(b.mus[0] - lo, hi - b.mus[0]) < 0.6

    def test_diverging_label(self):
        hp = HalfSpaceParams(2.0, 2.0, 0.0)
        mus = list(np.linspace(math.sqrt(8.0), 3.45, 12))
        b = Branch(zetas=list(np.linspace(-5, 5, 12)), mus=mus,
                   overlaps=[1.0] * 12, boundary_masses=[0.0] * 12)
        lab = classify_asymptotics(b, hp, hp, match_tol=1e-3, window=(-3.5, 3.5))
        assert lab.asymptote_hi.kind == "diverging"

    def test_flat_branch_classifies_to_its_level(self):
        hp = HalfSpaceParams(2.0, 2.0, 0.0)
        b = Branch(zetas=[-5.0, 0.0, 5.0], mus=[2.0, 2.0, 2.0], overlaps=[1.0] * 3,
                   boundary_masses=[0.0] * 3)
        lab = classify_asymptotics(b, hp, hp)
        assert lab.asymptote_lo.kind == "bulk_level" and lab.asymptote_lo.value == 2.0
        assert lab.asymptote_hi.kind == "bulk_level" and lab.asymptote_hi.value == 2.0

    def test_clipped_branch_rejected(self):
        hp = HalfSpaceParams(2.0, 2.0, 0.0)
        b = Branch(zetas=[0.0], mus=[2.0], overlaps=[1.0], boundary_masses=[0.0], clipped=True)
        with pytest.raises(ValueError):
            classify_asymptotics(b, hp, hp)


class TestValidateWindow:
    def test_empty_is_valid(self):
        assert validate_window([], 0.0, 0.1)

    def test_endpoint_near_alpha_invalid(self):
        b = Branch(zetas=[-5.0, 5.0], mus=[0.05, 2.0], overlaps=[1.0] * 2,
                   boundary_masses=[0.0] * 2)
        assert not validate_window([b], 0.0, 0.1)
        assert validate_window([b], 1.0, 0.1)

    def test_pipeline_window_valid_at_zero(self):
        ps = preset_profiles("dual_wall_v01")
        _, _, _, branches = small_sweep(ps)
        assert validate_window(branches, 0.0, 0.1)


class TestAutoscale:
    def test_returns_consistent_geometry(self):
        minus = HalfSpaceParams(-2.0, -2.0, -0.1)
        plus = HalfSpaceParams(2.0, 2.0, 0.1)
        grid, cfg, f = autoscale(minus, plus, (-1.5, 1.5))
        assert cfg.zeta_min < -abs(cfg.window[0]) and cfg.zeta_max > abs(cfg.window[1])
        assert grid.L > 1.0 + f.margin
        assert 64 <= grid.N <= 4000

    def test_scaled_sweep_reproduces_prediction(self, rng):
        from conftest import draw_interface_scenario

        minus, plus, alpha, _ = draw_interface_scenario(rng)
        grid, cfg, f = autoscale(minus, plus, (alpha - 1.5, alpha + 1.5))
        branches = sweep_branches(grid, walls(minus, plus), cfg, f)
        report = spectral_flow(branches, alpha, prediction=predicted_sf(minus, plus, alpha))
        assert report.sf_numeric == report.sf_predicted


class TestBranchPoints:
    def test_flat_rows(self):
        b = Branch(zetas=[0.0, 1.0], mus=[0.5, 0.6], overlaps=[1.0, 0.9],
                   boundary_masses=[0.0, 0.01])
        rows = branch_points([b])
        assert rows == [(0, 0.0, 0.5, 1.0, 0.0), (0, 1.0, 0.6, 0.9, 0.01)]
