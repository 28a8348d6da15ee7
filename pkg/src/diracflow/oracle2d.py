"""Brute-force 2D trace check of the interface conductivity, plus stability runs.

The 2D Hamiltonian H = D_x sigma_1 + (D_y - A2(x)) sigma_2 + m(x) sigma_3
+ V(x) sigma_0 is discretized with the same staggered x-stencil as the
fiber module and a spectral (Fourier) y-derivative on a periodic y-box.
The spectral y-derivative is what makes the discrete y-Fourier conjugation
reproduce the fiber matrices at zeta_n = 2 pi n / Ly exactly, which is the
cross-check tying the oracle to the fiber pipeline.

The conductivity is evaluated from the dense eigendecomposition as

    2 pi sigma_I = 2 pi * sum_k phi'(lambda_k) <v_k, P'(y) sigma_2 v_k>,

using the analytic commutator identity i[H, P] = P'(y) sigma_2.  States
whose x-profile oscillates at the lattice momentum edge (the staggered
scheme's zone-edge resonance, reachable at this deliberately coarse grid)
are excluded from the trace; they are pure discretization artifacts, the
2D analog of the boundary-localized states the fiber filter removes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import BudgetError, WindowError
from .fiber import Grid1D
from .profiles import (
    DensityProfile,
    ProfileSet,
    SwitchProfile,
    derivative,
    evaluate,
    magnetic_potential,
)

__all__ = [
    "Grid2D",
    "PerturbationSpec",
    "assemble_2d",
    "trace_conductivity",
    "TraceResult",
    "stability_experiment",
    "StabilityResult",
    "fourier_block",
    "default_projection",
]

_BUDGET = 6000
_ZONE_EDGE_CUT = 0.5


@dataclass(frozen=True)
class Grid2D:
    """1D x-grid crossed with a periodic y-box of length Ly and Ny sites."""

    grid_x: Grid1D
    Ly: float
    Ny: int

    def __post_init__(self):
        if self.Ny < 16:
            raise ValueError("Ny must be >= 16")
        if self.Ly <= 0:
            raise ValueError("Ly must be positive")

    @property
    def dim(self) -> int:
        return 2 * self.grid_x.N * self.Ny

    @property
    def hy(self) -> float:
        return self.Ly / self.Ny

    @property
    def y(self) -> np.ndarray:
        return self.hy * np.arange(self.Ny)


@dataclass(frozen=True)
class PerturbationSpec:
    """Perturbation W with the decay/support classes of the stability theorems.

    kinds:
      mult_x   -- W(x): compactly supported smooth bump, |x| <= support
      mult_xy  -- W(x, y): product of compact bumps in x and (centered) y
      decay_y  -- W(y) = amplitude * <y - Ly/2>^(-1-delta)
      decay_xy -- W(x, y) = amplitude * <(x, y - Ly/2)>^(-2-delta)
    """

    kind: str
    amplitude: float
    support: float = 2.0
    delta: float = 0.5

    def __post_init__(self):
        if self.kind not in ("mult_x", "mult_xy", "decay_y", "decay_xy"):
            raise ValueError(f"unknown perturbation kind {self.kind!r}")
        if self.kind.startswith("decay") and self.delta <= 0:
            raise ValueError("decay kinds require delta > 0")
        if self.kind.startswith("mult") and self.support <= 0:
            raise ValueError("mult kinds require positive support")

    def sample(self, x: np.ndarray, y: np.ndarray, Ly: float) -> np.ndarray:
        """W on the (N, Ny) grid; y is recentered so decay is measured from Ly/2."""
        yc = y - Ly / 2.0
        X, Y = np.meshgrid(x, yc, indexing="ij")
        if self.kind == "mult_x":
            return self.amplitude * _bump(X / self.support)
        if self.kind == "mult_xy":
            return self.amplitude * _bump(X / self.support) * _bump(Y / self.support)
        if self.kind == "decay_y":
            return self.amplitude * (1.0 + Y**2) ** (-(1.0 + self.delta) / 2.0)
        return self.amplitude * (1.0 + X**2 + Y**2) ** (-(2.0 + self.delta) / 2.0)


def _bump(t: np.ndarray) -> np.ndarray:
    """Standard C-infinity bump: exp(1 - 1/(1 - t^2)) on |t| < 1, 0 outside."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - t[inside] ** 2))
    return out


def _spectral_momentum(g: Grid2D) -> np.ndarray:
    """Hermitian matrix of -i d/dy on the periodic y-box (exact Fourier symbol)."""
    k = 2.0 * np.pi * np.fft.fftfreq(g.Ny, d=g.hy)
    F = np.fft.fft(np.eye(g.Ny)) / np.sqrt(g.Ny)
    Dy = F.conj().T @ np.diag(k) @ F
    return 0.5 * (Dy + Dy.conj().T)


def assemble_2d(
    g: Grid2D,
    ps: ProfileSet,
    w: PerturbationSpec | None = None,
    coupling: float = 0.0,
) -> np.ndarray:
    """Dense Hermitian 2D Hamiltonian; layout is (spinor, x-site, y-site)."""
    if g.dim > _BUDGET:
        raise BudgetError(f"2D dimension {g.dim} exceeds dense-solve budget {_BUDGET}")
    gx = g.grid_x
    N, h = gx.N, gx.h
    x = gx.x
    m = evaluate(ps.m, x)
    V = evaluate(ps.V, x)
    A2 = magnetic_potential(ps, x)

    Ix = np.eye(N)
    Iy = np.eye(g.Ny)
    Dxf = (np.diag(np.ones(N - 1), 1) - Ix) / h
    if gx.bc == "periodic":
        Dxf[N - 1, 0] = 1.0 / h
    Ky = _spectral_momentum(g)

    # (1,2) spinor block: -i d/dx - i (K_y - A2(x))
    blk = np.kron(-1j * Dxf, Iy) - 1j * (np.kron(Ix, Ky) - np.kron(np.diag(A2), Iy))

    n = N * g.Ny
    H = np.zeros((2 * n, 2 * n), dtype=complex)
    diag_up = np.kron(V + m, np.ones(g.Ny))
    diag_dn = np.kron(V - m, np.ones(g.Ny))
    H[np.arange(n), np.arange(n)] = diag_up
    H[n + np.arange(n), n + np.arange(n)] = diag_dn
    H[:n, n:] = blk
    H[n:, :n] = blk.conj().T

    if w is not None and coupling != 0.0:
        Wd = coupling * w.sample(x, g.y, g.Ly).ravel()
        H[np.arange(n), np.arange(n)] += Wd
        H[n + np.arange(n), n + np.arange(n)] += Wd
    return H


def fourier_block(H: np.ndarray, g: Grid2D, mode: int) -> np.ndarray:
    """Extract the fiber block at zeta_n = 2 pi n / Ly by discrete y-Fourier conjugation.

    Returned in the fiber module's interleaved ordering so it compares
    entrywise with assemble_fiber(grid_x, ps, zeta_n).entries.
    """
    N, Ny = g.grid_x.N, g.Ny
    n = N * Ny
    F = np.fft.fft(np.eye(Ny)) / np.sqrt(Ny)
    U = np.kron(np.eye(2 * N), F)
    Ht = U @ H @ U.conj().T
    j = mode % Ny
    idx = np.arange(N) * Ny + j
    full = np.concatenate([idx, n + idx])
    B = Ht[np.ix_(full, full)]
    # reorder (component-major, site) -> (site-major, interleaved spinor)
    perm = np.empty(2 * N, dtype=int)
    perm[0::2] = np.arange(N)
    perm[1::2] = N + np.arange(N)
    return B[np.ix_(perm, perm)]


def default_projection(g: Grid2D) -> SwitchProfile:
    """P(y) rising across the middle third of the y-box, clear of the seam."""
    return SwitchProfile(0.0, 1.0, g.Ly / 3.0, 2.0 * g.Ly / 3.0)


@dataclass(frozen=True)
class TraceResult:
    two_pi_sigma: float
    literal_two_pi_sigma: float
    seam_contribution: float
    n_states_cut: int


def _check_seam(P: SwitchProfile, g: Grid2D) -> None:
    if P.t_lo < g.Ly / 4.0 or P.t_hi > 3.0 * g.Ly / 4.0:
        raise WindowError(
            "projection transition too close to the periodic seam "
            f"(must lie within [{g.Ly / 4:.3g}, {3 * g.Ly / 4:.3g}])"
        )


def trace_conductivity(
    Hmat: np.ndarray,
    g: Grid2D,
    P: SwitchProfile,
    dens: DensityProfile,
    full_result: bool = False,
):
    """2 pi sigma_I = 2 pi Tr i[H, P] phi'(H) from a dense eigendecomposition.

    Primary estimator uses the analytic commutator i[H, P] = P'(y) sigma_2;
    a literal-commutator variant (seam-free central difference in y) is
    computed alongside for the manifest.  Raises on seam violations.
    """
    _check_seam(P, g)
    N, Ny = g.grid_x.N, g.Ny
    n = N * Ny
    if Hmat.shape != (2 * n, 2 * n):
        raise ValueError("matrix does not match the grid")

    lam, vec = sla.eigh(Hmat)

    y = g.y
    Pp = derivative(P, y)
    Pp_full = np.kron(np.ones(N), Pp)
    # literal variant: i [D_y^(2), P] with an open-chain central difference,
    # a banded approximation to P'(y) accurate to O(hy^2); the seam rows are
    # excluded (P' vanishes there for an admissible P)
    Dcd = (np.diag(np.ones(Ny - 1), 1) - np.diag(np.ones(Ny - 1), -1)) / (2 * g.hy)
    Mlit = 1j * ((-1j * Dcd) @ np.diag(evaluate(P, y)) - np.diag(evaluate(P, y)) @ (-1j * Dcd))
    Mlit_full = np.kron(np.eye(N), Mlit)
    seam_zone = np.kron(np.ones(N), (np.minimum(y, g.Ly - y) < g.Ly / 8.0) * Pp)

    weights = derivative(dens.phi, lam)
    live = np.nonzero(np.abs(weights) > 1e-14)[0]

    total = 0.0
    total_lit = 0.0
    seam = 0.0
    ncut = 0
    for k in live:
        v = vec[:, k]
        v1, v2 = v[:n], v[n:]
        if _zone_edge_fraction_x(v1, v2, N, Ny) > _ZONE_EDGE_CUT:
            ncut += 1
            continue
        # <v, P'(y) sigma_2 v> with sigma_2 = [[0, -i], [i, 0]]
        el = np.sum(np.conj(v1) * (-1j) * Pp_full * v2 + np.conj(v2) * 1j * Pp_full * v1).real
        el_lit = np.sum(
            np.conj(v1) * (-1j) * (Mlit_full @ v2) + np.conj(v2) * 1j * (Mlit_full @ v1)
        ).real
        el_seam = np.sum(np.conj(v1) * (-1j) * seam_zone * v2 + np.conj(v2) * 1j * seam_zone * v1).real
        total += weights[k] * el
        total_lit += weights[k] * el_lit
        seam += weights[k] * el_seam

    result = TraceResult(
        two_pi_sigma=2.0 * np.pi * total,
        literal_two_pi_sigma=2.0 * np.pi * total_lit,
        seam_contribution=2.0 * np.pi * abs(seam),
        n_states_cut=ncut,
    )
    return result if full_result else result.two_pi_sigma


def _zone_edge_fraction_x(v1: np.ndarray, v2: np.ndarray, N: int, Ny: int) -> float:
    """Mass fraction at the x lattice momentum edge (artifact detector)."""
    p1 = v1.reshape(N, Ny)
    p2 = v2.reshape(N, Ny)
    smooth = (
        float(np.sum(np.abs(p1[1:] + p1[:-1]) ** 2)) + float(np.sum(np.abs(p2[1:] + p2[:-1]) ** 2))
    ) / 4.0
    total = float(np.sum(np.abs(p1) ** 2) + np.sum(np.abs(p2) ** 2))
    return 1.0 - smooth / total


@dataclass(frozen=True)
class StabilityResult:
    rows: tuple[tuple[float, float], ...]  # (coupling, two_pi_sigma)
    baseline: int
    verdict: str  # "stable" | "unstable"


def stability_experiment(
    base: ProfileSet,
    w: PerturbationSpec,
    couplings: list[float],
    g: Grid2D,
    P: SwitchProfile,
    dens: DensityProfile,
) -> StabilityResult:
    """Conductivity at each coupling; stable iff all round to the unperturbed integer."""
    rows = []
    for c in couplings:
        H = assemble_2d(g, base, w, coupling=c)
        rows.append((float(c), float(trace_conductivity(H, g, P, dens))))
    baseline = round(rows[0][1])
    stable = all(round(s) == baseline for _, s in rows)
    return StabilityResult(rows=tuple(rows), baseline=baseline, verdict="stable" if stable else "unstable")
