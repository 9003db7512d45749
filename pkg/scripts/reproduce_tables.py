"""Re-run every published table and print one PASS/FAIL line per row.

Usage: python scripts/reproduce_tables.py [TABLE ...] [--precision BITS]
"""

import argparse
import sys

from spiked_moments.tables import TABLES, run_table


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("tables", nargs="*", default=list(TABLES))
    ap.add_argument("--precision", type=int, default=320)
    args = ap.parse_args()
    failed = 0
    for name in args.tables:
        for check in run_table(name, args.precision):
            failed += not check.passed
            print(f"{'PASS' if check.passed else 'FAIL'} {check.table} {check.label}: {check.detail}",
                  flush=True)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
