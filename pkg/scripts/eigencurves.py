"""Eigencurves log10(lambda_N(E)) at b = 0.5 for a few orders, one CSV per order.

Usage: python scripts/eigencurves.py OUTDIR [N ...]
"""

import os
import sys

from spiked_moments.cli import main

if __name__ == "__main__":
    outdir = sys.argv[1] if len(sys.argv) > 1 else "."
    orders = [int(n) for n in sys.argv[2:]] or [10, 50, 100]
    os.makedirs(outdir, exist_ok=True)
    status = 0
    for n in orders:
        status |= main(["oppq", "--mode", "bm-curve", "--b", "0.5", "--n", str(n),
                        "--grid", "0:8:400", "--out", os.path.join(outdir, f"curve_N{n}.csv")])
    sys.exit(status)
