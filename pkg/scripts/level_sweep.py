"""Lowest ten algebraic levels for b = 0..10 in steps of 0.5, written as CSV.

Usage: python scripts/level_sweep.py OUT.csv
"""

import sys

from spiked_moments.cli import main

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "level_sweep.csv"
    sys.exit(main(["oppq", "--mode", "sweep", "--b", "0:0.5:10", "--n", "100",
                   "--states", "0..9", "--out", out]))
