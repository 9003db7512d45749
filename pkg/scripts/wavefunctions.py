"""Reconstructed states 0..3 with the potential, for several displacements.

Usage: python scripts/wavefunctions.py OUTDIR [b ...]
"""

import os
import sys

from spiked_moments.cli import main

if __name__ == "__main__":
    outdir = sys.argv[1] if len(sys.argv) > 1 else "."
    bs = sys.argv[2:] or ["0", "1", "5", "10"]
    os.makedirs(outdir, exist_ok=True)
    status = 0
    for b in bs:
        hi = float(b) + 8
        status |= main(["oppq", "--mode", "reconstruct", "--b", b, "--states", "0..3",
                        "--grid", f"0.01:{hi}:300", "--out", os.path.join(outdir, f"states_b{b}.csv")])
    sys.exit(status)
