"""Discretized fiber operator and windowed Hermitian eigensolver.

The fiber operator at transverse momentum zeta is

    Hhat(zeta) = D_x sigma_1 + (zeta - A2(x)) sigma_2 + m(x) sigma_3 + V(x) sigma_0

on [-L, L].  D_x is discretized with a forward/backward adjoint stencil
pair (a 1D staggered scheme): the (1,2) spinor block applies the forward
difference, the (2,1) block its exact adjoint.  This keeps the matrix
Hermitian bit-exactly and leaves the kinetic symbol 2 sin(k h / 2) / h
without a second zero in the Brillouin zone, so no doubled branches
appear at small momentum transfer.

Known lattice artifact (recorded in the decisions ledger): the combined
symbol of forward difference plus a constant transverse term w = zeta -
A2(x) develops a spurious zone-edge zero when w is near +2/h.  States
born from that resonance oscillate at the lattice momentum edge and are
detectable by `zone_edge_fraction`; sweep geometry is chosen so they are
either absent or land in the boundary strip of the spurious filter.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import SolverError
from .profiles import ProfileSet, evaluate, magnetic_potential

__all__ = [
    "Grid1D",
    "FiberMatrix",
    "EigenPair",
    "SpuriousFilter",
    "assemble_fiber",
    "eig_window",
    "filter_spurious",
    "boundary_mass",
    "zone_edge_fraction",
]

# below this dimension a dense solve beats banded + inverse iteration
_DENSE_CUTOFF = 600


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid on [-L, L]; dirichlet truncates the stencil, periodic wraps it."""

    L: float
    N: int
    bc: str = "dirichlet"

    def __post_init__(self):
        if self.N < 16:
            raise ValueError("N must be >= 16")
        if self.L <= 0:
            raise ValueError("L must be positive")
        if self.bc not in ("dirichlet", "periodic"):
            raise ValueError(f"unknown boundary condition {self.bc!r}")

    @property
    def h(self) -> float:
        return 2.0 * self.L / (self.N - 1) if self.bc == "dirichlet" else 2.0 * self.L / self.N

    @property
    def x(self) -> np.ndarray:
        return -self.L + self.h * np.arange(self.N)

    def momentum_margin(self, ps: ProfileSet) -> float:
        """h * max(|B-|, |B+|) * L; values >= pi mean the zone-edge resonance
        w = zeta - A2 ~ 2/h is reachable inside the domain (soft warning)."""
        return self.h * max(abs(ps.B.lower), abs(ps.B.upper)) * self.L


@dataclass(frozen=True)
class FiberMatrix:
    """Hermitian 2N x 2N discretization of Hhat(zeta).

    Spinor components are interleaved (site i occupies rows 2i, 2i+1), so
    the dirichlet matrix has scalar bandwidth 3.
    """

    zeta: float
    grid: Grid1D
    entries: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return 2 * self.grid.N


def assemble_fiber(grid: Grid1D, ps: ProfileSet, zeta: float) -> FiberMatrix:
    """Assemble the fiber matrix; Hermitian by construction (adjoint stencils)."""
    N, h = grid.N, grid.h
    x = grid.x
    m = evaluate(ps.m, x)
    V = evaluate(ps.V, x)
    A2 = magnetic_potential(ps, x)
    w = zeta - A2

    H = np.zeros((2 * N, 2 * N), dtype=complex)
    idx = np.arange(N)
    # diagonal blocks: V +- m, pointwise
    H[2 * idx, 2 * idx] = V + m
    H[2 * idx + 1, 2 * idx + 1] = V - m
    # (1,2) block: forward difference plus transverse term; the (2,1)
    # block is its exact adjoint, written out entry by entry
    onsite = 1j * (1.0 / h - w)
    H[2 * idx, 2 * idx + 1] = onsite
    H[2 * idx + 1, 2 * idx] = np.conj(onsite)
    H[2 * idx[:-1], 2 * idx[:-1] + 3] = -1j / h
    H[2 * idx[:-1] + 3, 2 * idx[:-1]] = 1j / h
    if grid.bc == "periodic":
        # wrap term of the forward difference and its adjoint
        H[2 * (N - 1), 1] = -1j / h
        H[1, 2 * (N - 1)] = 1j / h
    return FiberMatrix(zeta=zeta, grid=grid, entries=H)


@dataclass(frozen=True)
class EigenPair:
    """One eigenpair with its verified residual ||H psi - mu psi||."""

    mu: float
    psi: np.ndarray = field(repr=False)
    residual: float


@dataclass(frozen=True)
class SpuriousFilter:
    """Boundary-artifact filter: drop states with too much mass near |x| = L."""

    margin: float
    threshold: float = 0.3

    def __post_init__(self):
        if not self.margin > 0:
            raise ValueError("margin must be positive")
        if not 0.0 < self.threshold < 1.0:
            raise ValueError("threshold must lie in (0, 1)")

    @classmethod
    def default(cls, grid: Grid1D) -> "SpuriousFilter":
        return cls(margin=grid.L / 8.0, threshold=0.3)


def _to_banded_upper(H: np.ndarray, bw: int) -> np.ndarray:
    """Pack a Hermitian banded matrix into LAPACK upper-banded storage."""
    n = H.shape[0]
    ab = np.zeros((bw + 1, n), dtype=complex)
    for u in range(bw + 1):
        ab[bw - u, u:] = np.diagonal(H, offset=u)
    return ab


def _inverse_iteration(
    Hs: sp.csr_matrix, vals: np.ndarray, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvectors for known eigenvalues via cluster-grouped inverse iteration.

    Values are grouped into near-degenerate clusters; each cluster gets a
    subspace inverse iteration (shared shifted LU factorization) followed
    by a Rayleigh-Ritz rotation, which keeps cluster members orthogonal.
    """
    n = Hs.shape[0]
    order = np.argsort(vals)
    vals = vals[order]
    vecs = np.empty((n, vals.size), dtype=complex)
    mus = np.empty(vals.size)

    clusters: list[list[int]] = []
    for i in range(vals.size):
        if clusters and vals[i] - vals[clusters[-1][-1]] < 1e-6:
            clusters[-1].append(i)
        else:
            clusters.append([i])

    eye = sp.identity(n, dtype=complex, format="csc")
    for cl in clusters:
        c = len(cl)
        shift = float(np.mean(vals[cl])) + 1e-9
        lu = spla.splu((Hs - shift * eye).tocsc())
        X = rng.standard_normal((n, c)) + 1j * rng.standard_normal((n, c))
        X, _ = np.linalg.qr(X)
        res = np.inf
        for it in range(10):
            X = lu.solve(X)
            X, _ = np.linalg.qr(X)
            # Rayleigh-Ritz inside the cluster subspace
            W = X.conj().T @ (Hs @ X)
            W = 0.5 * (W + W.conj().T)
            ritz, rot = np.linalg.eigh(W)
            X = X @ rot
            R = Hs @ X - X * ritz
            res = float(np.max(np.linalg.norm(R, axis=0)))
            if it >= 2 and res <= 1e-9 * (1.0 + float(np.max(np.abs(ritz)))):
                break
        else:
            raise SolverError(
                f"inverse iteration stalled: cluster at mu ~ {shift:.6g}, "
                f"size {c}, residual {res:.3e} after 10 iterations"
            )
        vecs[:, cl] = X
        mus[cl] = ritz
    return mus, vecs


def eig_window(A: FiberMatrix, window: tuple[float, float]) -> list[EigenPair]:
    """All eigenpairs with mu in [lo, hi], sorted by mu, residual-verified.

    Dense path for small or periodic matrices; banded eigenvalue scan
    plus sparse inverse iteration otherwise (an optimization only -- the
    dense solve defines the contract).
    """
    lo, hi = window
    if not lo < hi:
        raise ValueError("window lo must be < hi")
    H = A.entries
    n = H.shape[0]

    if n <= _DENSE_CUTOFF or A.grid.bc == "periodic":
        vals, vecs = sla.eigh(H, subset_by_value=(lo, hi))
        mus = vals
    else:
        bw = 3
        ab = _to_banded_upper(H, bw)
        vals = sla.eig_banded(
            ab, lower=False, eigvals_only=True, select="v", select_range=(lo, hi)
        )
        if vals.size == 0:
            return []
        rng = np.random.default_rng(7)
        offsets = [k for k in (-3, -1, 0, 1, 3) if np.any(np.diagonal(H, k))]
        Hs = sp.diags(
            [np.diagonal(H, k).copy() for k in offsets], offsets, format="csr", dtype=complex
        )
        mus, vecs = _inverse_iteration(Hs, np.asarray(vals), rng)

    pairs = []
    for mu, v in zip(mus, vecs.T):
        if not lo <= mu <= hi:
            continue
        nrm = np.linalg.norm(v)
        v = v / nrm
        r = float(np.linalg.norm(H @ v - mu * v))
        if r > 1e-8 * (1.0 + abs(mu)):
            raise SolverError(f"residual {r:.3e} exceeds contract at mu = {mu:.6g}")
        pairs.append(EigenPair(mu=float(mu), psi=v, residual=r))
    pairs.sort(key=lambda p: p.mu)
    return pairs


def boundary_mass(psi: np.ndarray, grid: Grid1D, margin: float) -> float:
    """Probability mass of an interleaved spinor in the strip |x| > L - margin."""
    dens = np.abs(psi.reshape(grid.N, 2)) ** 2
    strip = np.abs(grid.x) > grid.L - margin
    return float(dens[strip].sum() / dens.sum())


def zone_edge_fraction(psi: np.ndarray) -> float:
    """Fraction of spectral mass near the lattice momentum edge.

    Smooth states score ~ 0; states born from the w ~ 2/h lattice
    resonance oscillate site-to-site and score ~ 1.  Used as a
    diagnostic for discretization artifacts that are not
    boundary-localized.
    """
    comps = psi.reshape(-1, 2)
    smooth = float(np.sum(np.abs(comps[1:] + comps[:-1]) ** 2)) / 4.0
    total = float(np.sum(np.abs(comps) ** 2))
    return 1.0 - smooth / total


def filter_spurious(
    pairs: list[EigenPair], grid: Grid1D, f: SpuriousFilter
) -> list[EigenPair]:
    """Drop pairs whose boundary-strip mass exceeds the threshold.

    Pairs with boundary mass below the threshold are always kept.
    """
    return [p for p in pairs if boundary_mass(p.psi, grid, f.margin) <= f.threshold]
