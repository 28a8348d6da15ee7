#!/usr/bin/env python3
"""Produce the branch-plot SVG and CSV for every preset scenario.

Usage: python scripts/run_all_figures.py [--out OUT] [--workers W]
"""

import argparse
import sys

from diracflow.cli import main as cli_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/figures")
    ap.add_argument("--workers", type=int, default=1)
    ns = ap.parse_args()
    return cli_main(["all-figures", "--out", ns.out, "--workers", str(ns.workers)])


if __name__ == "__main__":
    sys.exit(main())
