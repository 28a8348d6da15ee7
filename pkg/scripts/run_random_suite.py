#!/usr/bin/env python3
"""Randomized bulk-interface correspondence sweep.

Draws admissible random interface scenarios, auto-scales grid and sweep
per scenario, and compares the tracked spectral flow with the closed-form
half-space prediction. Prints one line per scenario and a final tally.

Usage: python scripts/run_random_suite.py [--n N] [--seed S]
"""

import argparse
import sys
import time

sys.path.insert(0, "tests")

from diracflow.branches import autoscale, sweep_branches
from diracflow.bulk import predicted_sf
from diracflow.flow import spectral_flow

from conftest import draw_interface_scenario, walls

import numpy as np


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ns = ap.parse_args()

    rng = np.random.default_rng(ns.seed)
    bad = 0
    for i in range(ns.n):
        minus, plus, alpha, _ = draw_interface_scenario(rng)
        grid, cfg, f = autoscale(minus, plus, (alpha - 1.5, alpha + 1.5))
        t0 = time.perf_counter()
        branches = sweep_branches(grid, walls(minus, plus), cfg, f)
        report = spectral_flow(branches, alpha, prediction=predicted_sf(minus, plus, alpha))
        ok = report.sf_numeric == report.sf_predicted
        bad += not ok
        print(
            f"[{i + 1:3d}/{ns.n}] B=({minus.B:+.2f},{plus.B:+.2f}) "
            f"m=({minus.m:+.2f},{plus.m:+.2f}) V=({minus.V:+.2f},{plus.V:+.2f}) "
            f"alpha={alpha:+.2f}  sf={report.sf_numeric} pred={report.sf_predicted} "
            f"N={grid.N} {'ok' if ok else 'MISMATCH'} ({time.perf_counter() - t0:.1f}s)"
        )
    print(f"{ns.n - bad}/{ns.n} matched")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
