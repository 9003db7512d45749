"""Command-line front end: ``emm``, ``oppq`` and ``verify``.

Exit status is 0 on success, 1 on a computational failure (or a failed
verification row) and 2 on a usage error.  Defaults come from, in order of
priority: flags, a ``key = value`` config file (``--config`` or
``$SPIKED_CONFIG``), ``$SPIKED_PRECISION`` and built-in values.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from mpmath import mp, mpf, log10

from . import emm, oppq, tables
from .model import Problem, Representation, potential
from .numerics import PRECISION_ENV, default_precision, working_precision
from .records import RunRecord, csv_text, write_atomic

CONFIG_ENV = "SPIKED_CONFIG"
CONFIG_KEYS = {"precision", "pmax", "n", "format", "terms"}
PARSE_BITS = 4096


class UsageError(Exception):
    pass


def read_config(path: str | None) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    out = {}
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip().lower()
            if not sep or key not in CONFIG_KEYS:
                raise UsageError(f"{path}:{n}: expected one of {sorted(CONFIG_KEYS)} as key = value")
            out[key] = value.strip()
    return out


def _pair(text: str) -> tuple[mpf, mpf]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected lo,hi")
    lo, hi = mpf(parts[0]), mpf(parts[1])
    if not lo < hi:
        raise argparse.ArgumentTypeError("expected lo < hi")
    return lo, hi


def _range3(text: str) -> list:
    # "lo:hi:count" for grids, "lo:step:hi" is handled by _b_values
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected lo:hi:count")
    lo, hi, count = mpf(parts[0]), mpf(parts[1]), int(parts[2])
    if count < 2 or not lo < hi:
        raise argparse.ArgumentTypeError("expected lo < hi and count >= 2")
    return [lo + (hi - lo) * k / (count - 1) for k in range(count)]


def _b_values(text: str) -> list:
    if ":" not in text:
        return [mpf(text)]
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected b or lo:step:hi")
    lo, step, hi = (mpf(p) for p in parts)
    if step <= 0 or hi < lo:
        raise argparse.ArgumentTypeError("expected step > 0 and lo <= hi")
    n = int(mp.nint((hi - lo) / step))
    return [lo + step * k for k in range(n + 1)]


def _states(text: str) -> list:
    if ".." in text:
        a, b = text.split("..")
        return list(range(int(a), int(b) + 1))
    return [int(s) for s in text.split(",")]


def _bound(text: str) -> mpf:
    text = text.strip()
    if text.startswith("10^"):
        return mpf(10) ** mpf(text[3:])
    return mpf(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spiked-moments", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="key = value defaults file")
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, help=f"mantissa bits (default ${PRECISION_ENV} or 320)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--out", help="write the output here instead of stdout")

    e = sub.add_parser("emm", parents=[common], help="certified bounds from Hankel positivity")
    e.add_argument("--rep", required=True, choices=("psi", "phi", "psi2"))
    e.add_argument("--sigma", type=int)
    e.add_argument("--b", required=True, type=mpf)
    e.add_argument("--pmax", type=int)
    e.add_argument("--state", type=int, default=0)
    e.add_argument("--scan", type=_pair)

    o = sub.add_parser("oppq", parents=[common], help="orthonormal-polynomial projection")
    o.add_argument("--mode", required=True,
                   choices=("am", "bm-curve", "bm-min", "bm-bounds", "reconstruct", "sweep"))
    o.add_argument("--b", required=True, type=_b_values)
    o.add_argument("--n", type=int, help="projection order (default 100)")
    o.add_argument("--bu", type=_bound, help="level for bm-bounds, e.g. 10^-0.79738")
    o.add_argument("--grid", type=_range3, help="lo:hi:count energy (or chi) grid")
    o.add_argument("--nmax", type=int, help="coefficients kept in reconstruct (default 40)")
    o.add_argument("--states", type=_states, help="state list, e.g. 0..3")
    o.add_argument("--scan", type=_pair, help="root scan window for am")
    o.add_argument("--data", help="CSV artifact path for curves, wavefunctions and sweeps")

    v = sub.add_parser("verify", help="reproduce a published table")
    v.add_argument("table", choices=tuple(tables.TABLES))
    v.add_argument("--rows", help="comma-separated label filters, e.g. 'N=10,N=20'")
    v.add_argument("--precision", type=int)
    return p


def _precision(args, config) -> int:
    if getattr(args, "precision", None):
        bits = args.precision
    elif "precision" in config:
        bits = int(config["precision"])
    else:
        bits = default_precision()
    if bits < 128:
        raise UsageError("precision must be at least 128 bits")
    return bits


def _emit(args, config, record: RunRecord, header: list, rows: list) -> None:
    fmt = args.format or config.get("format", "csv")
    text = record.to_json() if fmt == "json" else csv_text(header, rows)
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def _rounded(bits: int, value):
    # round parsed values (mpf, lists or pairs of mpf) to the run's precision
    with working_precision(bits):
        if isinstance(value, (list, tuple)):
            return type(value)(+v for v in value)
        return +value


def cmd_emm(args, config) -> RunRecord:
    rep = Representation(args.rep)
    if rep is Representation.PSI2 and args.sigma is not None:
        raise UsageError("--sigma does not apply to psi2")
    if rep is Representation.PHI and args.sigma not in (0, 3):
        raise UsageError("phi needs --sigma 0 or 3")
    if rep is Representation.PSI and args.sigma not in (None, 0, 1):
        raise UsageError("psi takes --sigma 0 or 1 (b = 0 chains) or none")
    if rep is Representation.PSI and args.sigma is not None and args.b != 0:
        raise UsageError("psi chains need --b 0")
    if rep is not Representation.PSI2 and args.state != 0:
        raise UsageError("psi and phi bound the ground state only; use psi2 for --state > 0")
    if args.b < 0:
        raise UsageError("--b must be >= 0")
    pmax = args.pmax or (int(config["pmax"]) if "pmax" in config else None)
    if pmax is None:
        raise UsageError("--pmax is required")
    bits = _precision(args, config)
    args.b = _rounded(bits, args.b)
    start = time.perf_counter()
    scan = _rounded(bits, args.scan) if args.scan else None
    if rep is Representation.PSI2:
        scan = scan or tables.state_window(args.b, args.state)
        with working_precision(bits):
            iv = emm.psi2_state_bounds(args.b, args.state, pmax, scan)
    else:
        scan = scan or emm.DEFAULT_GROUND_SCAN
        with working_precision(bits):
            iv = emm.ground_bounds(Problem(args.b, rep, args.sigma), pmax, scan)
    record = RunRecord("emm", args.b, rep.value, args.sigma, args.state, pmax, bits, scan,
                       {"E_L": iv.E_L, "E_U": iv.E_U}, time.perf_counter() - start)
    header = ["method", "b", "state", "order", "E_L", "E_U"]
    _emit(args, config, record, header, [[iv.method, args.b, args.state, pmax, iv.E_L, iv.E_U]])
    return record


def cmd_oppq(args, config) -> RunRecord:
    N = args.n or (int(config["n"]) if "n" in config else 100)
    bits_req = _precision(args, config)
    bs = args.b
    if args.mode != "sweep" and len(bs) != 1:
        raise UsageError("only --mode sweep accepts a range of b")
    if any(b < 0 for b in bs):
        raise UsageError("--b must be >= 0")
    bits = tables.auto_precision(N, max(bs), bits_req)
    bs = _rounded(bits, bs)
    b = bs[0]
    for name in ("grid", "scan"):
        if getattr(args, name):
            setattr(args, name, _rounded(bits, getattr(args, name)))
    states = args.states or [0, 1, 2, 3]
    start = time.perf_counter()
    artifact = None
    with working_precision(bits):
        if args.mode == "am":
            scan = args.scan or (mpf("0.4"), mpf(2 * len(states) + 1))
            roots = oppq.am_energies(b, N, scan)
            result = {"roots": roots}
            header, rows = ["index", "E"], [[k, r] for k, r in enumerate(roots)]
            scan_rec = scan
        elif args.mode in ("bm-curve", "bm-min"):
            grid = args.grid or _range3("0:8:200")
            curve = oppq.bm_curve(b, N, grid, refine=args.mode == "bm-min")
            if args.mode == "bm-curve":
                result = {"minima": [E for E, _ in curve.minima]}
                header = ["E", "lambda", "log10_lambda"]
                rows = [[E, v, log10(v)] for E, v in zip(curve.energies, curve.values)]
            else:
                result = {"E_min": [E for E, _ in curve.minima],
                          "log10_lambda": [log10(v) for _, v in curve.minima]}
                header = ["state", "E_min", "log10_lambda"]
                rows = [[k, E, log10(v)] for k, (E, v) in enumerate(curve.minima)]
                artifact = csv_text(["E", "lambda"], list(zip(curve.energies, curve.values)))
            scan_rec = (grid[0], grid[-1])
        elif args.mode == "bm-bounds":
            if args.bu is None:
                raise UsageError("bm-bounds needs --bu")
            grid = args.grid or _range3("0:8:200")
            curve = oppq.bm_curve(b, N, grid, refine=False)
            state = states[0]
            if state >= len(curve.minima):
                raise ArithmeticError(f"the curve has only {len(curve.minima)} minima on the grid")
            E0 = curve.minima[state][0]
            k = curve.energies.index(E0)
            window = (curve.energies[k - 1], curve.energies[k + 1])
            iv = oppq.bm_bounds(b, N, args.bu, window)
            result = {"E_L": iv.E_L, "E_U": iv.E_U, "E_min": iv.E_min}
            header = ["state", "E_L", "E_U", "E_min", "log10_lambda_min"]
            rows = [[state, iv.E_L, iv.E_U, iv.E_min, log10(iv.lambda_min)]]
            scan_rec = window
        elif args.mode == "reconstruct":
            grid = args.grid or _range3(f"0.01:{float(b) + 8}:200")
            terms = args.nmax or (int(config["terms"]) if "terms" in config else 40)
            levels = oppq.am_energies(b, N, (mpf("0.4"), mpf(2 * max(states) + 3)))
            cols, energies = [], []
            for s in states:
                if s >= len(levels):
                    raise ArithmeticError(f"level {s} not found below {2 * max(states) + 3}")
                rec = oppq.reconstruct(b, levels[s], grid, order=N, terms=terms)
                cols.append(rec.values)
                energies.append(levels[s])
            result = {"energies": energies}
            header = ["chi", "V"] + [f"psi_{s}" for s in states]
            rows = [[x, potential(x, b)] + [c[i] for c in cols] for i, x in enumerate(grid)]
            scan_rec = (grid[0], grid[-1])
        else:  # sweep
            top = max(states)
            table = oppq.sweep_energies(bs, top + 1, N)
            header = ["b"] + [f"E_{s}" for s in states]
            rows = [[bb] + [table[bb][s] if s < len(table[bb]) else None for s in states] for bb in bs]
            result = {"b_count": len(bs)}
            scan_rec = (bs[0], bs[-1])
    record = RunRecord(f"oppq-{args.mode}", b, "psi", None, None, N, bits, scan_rec,
                       result, time.perf_counter() - start)
    if args.data and artifact is None:
        artifact = csv_text(header, rows)
    if args.data:
        write_atomic(args.data, artifact)
    _emit(args, config, record, header, rows)
    return record


def cmd_verify(args, config) -> int:
    bits = _precision(args, config)
    rows = args.rows.split(",") if args.rows else None
    failures = 0
    count = 0
    for check in tables.run_table(args.table, bits, rows):
        count += 1
        failures += not check.passed
        status = "PASS" if check.passed else "FAIL"
        print(f"{status} {check.table} {check.label}: {check.detail}", flush=True)
    if count == 0:
        raise UsageError("no rows matched --rows")
    print(f"{args.table}: {count - failures}/{count} rows pass")
    return 1 if failures else 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        # numeric flags become mpf during parsing; keep them exact beyond any working precision
        with mp.workprec(PARSE_BITS):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        config = read_config(args.config)
        if args.command == "emm":
            cmd_emm(args, config)
            return 0
        if args.command == "oppq":
            cmd_oppq(args, config)
            return 0
        return cmd_verify(args, config)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
