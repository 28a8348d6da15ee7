#!/usr/bin/env python3
"""2D dense-trace oracle convergence table.

Computes 2*pi*sigma on a doubling sequence of (Ny, Ly) boxes at fixed
x-geometry for the standard dual-wall scenario, showing convergence of
the trace toward the quantized value 1.

Usage: python scripts/run_oracle_convergence.py [--levels K]
"""

import argparse
import sys
import time

from diracflow.fiber import Grid1D
from diracflow.oracle2d import Grid2D, assemble_2d, default_projection, trace_conductivity
from diracflow.presets import preset_profiles
from diracflow.profiles import DensityProfile


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--levels", type=int, default=2, help="doubling steps (dim grows fast)")
    ns = ap.parse_args()

    ps = preset_profiles("dual_wall_v01")
    dens = DensityProfile.from_window(-1.0, 1.0)
    print(f"{'Ny':>4} {'Ly':>6} {'dim':>6} {'2pi*sigma':>12} {'|dev|':>10} {'secs':>6}")
    Ny, Ly = 16, 12.0
    for _ in range(ns.levels):
        g = Grid2D(grid_x=Grid1D(L=12.0, N=48), Ly=Ly, Ny=Ny)
        t0 = time.perf_counter()
        val = trace_conductivity(assemble_2d(g, ps), g, default_projection(g), dens)
        print(
            f"{Ny:4d} {Ly:6.1f} {g.dim:6d} {val:12.6f} {abs(val - 1.0):10.2e} "
            f"{time.perf_counter() - t0:6.1f}"
        )
        Ny, Ly = 2 * Ny, 2 * Ly
    return 0


if __name__ == "__main__":
    sys.exit(main())
