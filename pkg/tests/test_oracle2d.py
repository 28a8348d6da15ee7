"""2D dense-trace oracle: assembly, Fourier-block correspondence, traces."""

import numpy as np
import pytest

from diracflow.errors import BudgetError, WindowError
from diracflow.fiber import Grid1D, assemble_fiber
from diracflow.oracle2d import (
    Grid2D,
    PerturbationSpec,
    assemble_2d,
    default_projection,
    fourier_block,
    trace_conductivity,
)
from diracflow.profiles import DensityProfile, ProfileSet, SwitchProfile

from conftest import walls
from diracflow.bulk import HalfSpaceParams

SMALL = Grid2D(grid_x=Grid1D(L=6.0, N=20), Ly=12.0, Ny=16)
FIG2 = walls(HalfSpaceParams(-2.0, -2.0, -0.1), HalfSpaceParams(2.0, 2.0, 0.1))


class TestGrid2D:
    def test_geometry(self):
        assert SMALL.dim == 2 * 20 * 16
        assert SMALL.hy == pytest.approx(0.75)
        assert SMALL.y[0] == 0.0 and SMALL.y[-1] == pytest.approx(12.0 - 0.75)

    def test_validation(self):
        with pytest.raises(ValueError):
            Grid2D(grid_x=Grid1D(L=6.0, N=20), Ly=12.0, Ny=8)
        with pytest.raises(ValueError):
            Grid2D(grid_x=Grid1D(L=6.0, N=20), Ly=0.0, Ny=16)


class TestPerturbationSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            PerturbationSpec(kind="shear", amplitude=1.0)
        with pytest.raises(ValueError):
            PerturbationSpec(kind="decay_y", amplitude=1.0, delta=0.0)
        with pytest.raises(ValueError):
            PerturbationSpec(kind="mult_x", amplitude=1.0, support=0.0)

    def test_mult_x_compact_support(self):
        w = PerturbationSpec(kind="mult_x", amplitude=0.5, support=2.0)
        W = w.sample(SMALL.grid_x.x, SMALL.y, SMALL.Ly)
        assert W.shape == (20, 16)
        outside = np.abs(SMALL.grid_x.x) >= 2.0
        assert np.all(W[outside, :] == 0.0)
        # grid need not hit x = 0 exactly, so the sampled peak sits just below
        assert 0.4 < np.max(W) <= 0.5
        # independent of y
        assert np.max(np.abs(W - W[:, :1])) == 0.0

    def test_decay_y_centered(self):
        w = PerturbationSpec(kind="decay_y", amplitude=1.0, delta=0.5)
        W = w.sample(SMALL.grid_x.x, SMALL.y, SMALL.Ly)
        mid = np.argmin(np.abs(SMALL.y - SMALL.Ly / 2))
        assert np.max(W) == pytest.approx(W[0, mid])
        assert W[0, 0] < W[0, mid]

    def test_decay_xy_decays_both_ways(self):
        w = PerturbationSpec(kind="decay_xy", amplitude=0.3, delta=0.5)
        W = w.sample(SMALL.grid_x.x, SMALL.y, SMALL.Ly)
        mid = np.argmin(np.abs(SMALL.y - SMALL.Ly / 2))
        cx = np.argmin(np.abs(SMALL.grid_x.x))
        assert W[cx, mid] == np.max(W)
        assert W[0, mid] < W[cx, mid] and W[cx, 0] < W[cx, mid]


class TestAssemble2D:
    def test_hermitian_bit_exact(self):
        H = assemble_2d(SMALL, FIG2)
        assert np.max(np.abs(H - H.conj().T)) == 0.0
        w = PerturbationSpec(kind="mult_xy", amplitude=0.5)
        Hp = assemble_2d(SMALL, FIG2, w, coupling=0.7)
        assert np.max(np.abs(Hp - Hp.conj().T)) == 0.0

    def test_zero_coupling_matches_unperturbed(self):
        w = PerturbationSpec(kind="decay_xy", amplitude=0.3)
        H0 = assemble_2d(SMALL, FIG2)
        Hc = assemble_2d(SMALL, FIG2, w, coupling=0.0)
        assert np.array_equal(H0, Hc)

    def test_budget_enforced(self):
        big = Grid2D(grid_x=Grid1D(L=6.0, N=64), Ly=12.0, Ny=64)
        with pytest.raises(BudgetError):
            assemble_2d(big, FIG2)

    def test_fourier_blocks_reproduce_fibers(self):
        """Block-diagonalizing in y recovers the fiber matrices at the
        discrete momenta 2*pi*n/Ly, entrywise below 1e-12."""
        H = assemble_2d(SMALL, FIG2)
        for mode in (0, 1, SMALL.Ny // 2, SMALL.Ny - 3):
            zeta = 2.0 * np.pi * np.fft.fftfreq(SMALL.Ny, d=SMALL.hy)[mode]
            fib = assemble_fiber(SMALL.grid_x, FIG2, float(zeta)).entries
            blk = fourier_block(H, SMALL, mode)
            assert np.max(np.abs(blk - fib)) < 1e-12


class TestTrace:
    def test_identical_half_spaces_zero(self):
        ps = ProfileSet(
            B=SwitchProfile(2.0, 2.0), m=SwitchProfile(2.0, 2.0), V=SwitchProfile(0.1, 0.1)
        )
        g = Grid2D(grid_x=Grid1D(L=6.0, N=24), Ly=12.0, Ny=16)
        val = trace_conductivity(
            assemble_2d(g, ps), g, default_projection(g), DensityProfile.from_window(-1.0, 1.0)
        )
        assert abs(val) <= 0.05

    def test_projection_invariance(self):
        g = Grid2D(grid_x=Grid1D(L=6.0, N=24), Ly=12.0, Ny=16)
        H = assemble_2d(g, FIG2)
        dens = DensityProfile.from_window(-1.0, 1.0)
        P1 = default_projection(g)
        P2 = SwitchProfile(0.0, 1.0, P1.t_lo - 0.9, P1.t_hi - 0.9)
        v1 = trace_conductivity(H, g, P1, dens)
        v2 = trace_conductivity(H, g, P2, dens)
        assert abs(v1 - v2) <= 0.02

    def test_seam_violation_raises(self):
        g = SMALL
        H = np.zeros((g.dim, g.dim), dtype=complex)
        P_bad = SwitchProfile(0.0, 1.0, 0.5, 2.0)  # transition hugging the seam
        with pytest.raises(WindowError):
            trace_conductivity(H, g, P_bad, DensityProfile.from_window(-1.0, 1.0))

    def test_full_result_fields(self):
        g = Grid2D(grid_x=Grid1D(L=6.0, N=24), Ly=12.0, Ny=16)
        res = trace_conductivity(
            assemble_2d(g, FIG2), g, default_projection(g),
            DensityProfile.from_window(-1.0, 1.0), full_result=True,
        )
        assert abs(res.seam_contribution) < 1e-8
        assert res.n_states_cut >= 0
        assert np.isfinite(res.literal_two_pi_sigma)
