"""Row-by-row reproduction of the published tables and the level-diagram sweep.

Every check yields a :class:`RowCheck`; ``verify`` prints them and the
acceptance suite asserts on them.  Heavy rows (high orders, cutting-plane
scans) take minutes, so callers can filter rows by label.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

from mpmath import mp, mpf, log10

from . import emm, oppq, reference
from .model import Problem, Representation
from .numerics import working_precision

__all__ = ["RowCheck", "TABLES", "run_table", "state_window", "auto_precision"]


@dataclass(frozen=True)
class RowCheck:
    table: str
    label: str
    passed: bool
    detail: str


def auto_precision(order: int, b, requested: int | None = None) -> int:
    """Requested bits, raised to what a projection of ``order`` needs."""
    need = oppq.required_precision(order, b)
    return max(need, requested or 0)


def state_window(b, state: int, order: int = 60) -> tuple[mpf, mpf]:
    """Scan window isolating level ``state``, from algebraic estimates.

    The edges sit halfway to the neighbouring levels (and at 0.45 below the
    ground level).
    """
    with working_precision(auto_precision(order, b)):
        levels = oppq.am_energies(b, order, (0.4, 2 * state + 4.5))
    if len(levels) <= state + 1:
        raise ArithmeticError(f"only {len(levels)} algebraic levels below {2 * state + 4.5}")
    lo = mpf("0.45") if state == 0 else (levels[state - 1] + levels[state]) / 2
    hi = (levels[state] + levels[state + 1]) / 2
    return +lo, +hi


def _fmt(x, d=16) -> str:
    return mp.nstr(x, d)


def _decimals(text: str) -> int:
    return len(text.split(".")[1]) if "." in text else 0


def _interval_row(table, label, iv, lo, hi) -> RowCheck:
    lo, hi = mpf(lo), mpf(hi)
    ok = iv.overlaps(lo, hi)
    return RowCheck(table, label, ok,
                    f"computed [{_fmt(iv.E_L)}, {_fmt(iv.E_U)}] vs printed [{_fmt(lo)}, {_fmt(hi)}]")


def _t1(precision) -> Iterator[tuple[str, Callable[[], RowCheck]]]:
    for (b, chain), (lo, hi, P) in reference.EMM_PSI.items():
        label = f"b={b}" + (f" chain={chain}" if chain is not None else "") + f" P={P}"

        def run(b=b, chain=chain, lo=lo, hi=hi, P=P, label=label):
            with working_precision(precision):
                iv = emm.ground_bounds(Problem(mpf(b), Representation.PSI, chain), P)
            return _interval_row("T1", label, iv, lo, hi)
        yield label, run


def _t2(precision):
    for (b, sigma), (lo, hi, P) in reference.EMM_PHI.items():
        label = f"b={b} sigma={sigma} P={P}"

        def run(b=b, sigma=sigma, lo=lo, hi=hi, P=P, label=label):
            with working_precision(precision):
                iv = emm.ground_bounds(Problem(mpf(b), Representation.PHI, sigma), P)
            return _interval_row("T2", label, iv, lo, hi)
        yield label, run


def _t3(precision):
    for (b, state), (lo, hi, P) in reference.EMM_PSI2.items():
        label = f"b={b} state={state} P={P}"

        def run(b=b, state=state, lo=lo, hi=hi, P=P, label=label):
            window = state_window(mpf(b), state)
            with working_precision(precision):
                iv = emm.psi2_state_bounds(mpf(b), state, P, window)
            return _interval_row("T3", label, iv, lo, hi)
        yield label, run


def _t4(precision):
    for b, expected in reference.AM_ENERGIES.items():
        label = f"b={b}"

        def run(b=b, expected=expected, label=label):
            with working_precision(auto_precision(100, mpf(b), precision)):
                roots = oppq.am_energies(mpf(b), 100, (0.4, 9.0))[:4]
            errs = [abs(r - mpf(e)) for r, e in zip(roots, expected)]
            ok = len(roots) == 4 and max(errs) <= mpf("1e-8")
            return RowCheck("T4", label, ok,
                            "computed " + " ".join(_fmt(r, 12) for r in roots))
        yield label, run


def _t5(precision):
    for N, exact in reference.DETERMINANT_EXACT_FACTORS.items():
        label = f"N={N}"

        def run(N=N, exact=exact, label=label):
            with working_precision(auto_precision(N, 0, precision)):
                roots = oppq.am_energies(0, N, (0.4, 2 * exact + 16.0), step=0.005)
            ok = all(any(abs(r - 2 * (n + 1)) <= mpf("1e-6") for r in roots) for n in range(exact))
            for extra in reference.DETERMINANT_EXTRA_ROOTS.get(N, ()):
                ok = ok and any(abs(r - mpf(extra)) <= mpf("1e-3") for r in roots)
            return RowCheck("T5", label, ok, "roots " + " ".join(_fmt(r, 8) for r in roots))
        yield label, run


def _t6(precision):
    for N, states in reference.BM_MINIMA.items():
        label = f"N={N}"

        def run(N=N, states=states, label=label):
            notes, ok = [], True
            with working_precision(auto_precision(N, mpf("0.5"), precision)):
                basis = oppq.build_basis(mpf("0.5"), N + 1)
                for E_txt, L_txt in states:
                    E0 = mpf(E_txt)
                    half = mpf("0.05")
                    E, lam = oppq.bm_minimum(mpf("0.5"), N, (E0 - half, E0 + half), basis=basis)
                    tolE = 1.5 * mpf(10) ** -_decimals(E_txt)
                    tolL = 1.5 * mpf(10) ** -_decimals(L_txt)
                    good = abs(E - E0) <= tolE and abs(log10(lam) - mpf(L_txt)) <= tolL
                    ok = ok and good
                    notes.append(f"{_fmt(E, 14)}/{_fmt(log10(lam), 9)}")
            return RowCheck("T6", label, ok, " ".join(notes))
        yield label, run


def _t7(precision):
    for N, states in reference.BM_INTERVALS.items():
        label = f"N={N}"

        def run(N=N, states=states, label=label):
            notes, ok = [], True
            b = mpf("0.5")
            with working_precision(auto_precision(N, b, precision)):
                basis = oppq.build_basis(b, N + 1)
                for k, (lo, hi) in enumerate(states):
                    bound = mpf(10) ** mpf(reference.BM_LOG10_BOUNDS[k])
                    centre = mpf(reference.BM_MINIMA[100][k][0])
                    half = mpf("0.3") if N < 20 else mpf("0.02")
                    iv = oppq.bm_bounds(b, N, bound, (centre - half, centre + half), basis=basis)
                    good = abs(iv.E_L - mpf(lo)) <= mpf("1e-8") and abs(iv.E_U - mpf(hi)) <= mpf("1e-8")
                    ok = ok and good
                    notes.append(f"[{_fmt(iv.E_L, 12)}, {_fmt(iv.E_U, 12)}]")
            return RowCheck("T7", label, ok, " ".join(notes))
        yield label, run


FIG1_STATES = 10


def _fig1(precision):
    bs = [mpf(k) / 2 for k in range(21)]
    label = f"b=0..10 step 0.5 levels 0..{FIG1_STATES - 1}"

    def run():
        levels = {}
        for b in bs:
            with working_precision(auto_precision(100, b, precision)):
                levels[b] = oppq.am_energies(b, 100, (0.4, 2 * FIG1_STATES + 0.5))[:FIG1_STATES]
        ok = all(len(v) == FIG1_STATES for v in levels.values())
        for n in range(FIG1_STATES):
            seq = [levels[b][n] for b in bs if len(levels[b]) > n]
            ok = ok and all(x > y for x, y in zip(seq, seq[1:]))
            ok = ok and all(x > n + mpf(1) / 2 for x in seq)
        return RowCheck("FIG1", label, ok, f"{len(bs)} values of b")
    yield label, run


TABLES = {"T1": _t1, "T2": _t2, "T3": _t3, "T4": _t4, "T5": _t5, "T6": _t6, "T7": _t7,
          "FIG1": _fig1}


def run_table(table: str, precision: int = 320, rows: list | None = None) -> Iterator[RowCheck]:
    """Run every row of ``table`` whose label contains one of ``rows``."""
    if table not in TABLES:
        raise KeyError(f"unknown table {table!r}; choose from {', '.join(TABLES)}")
    for label, run in TABLES[table](precision):
        if rows and not any(r in label for r in rows):
            continue
        yield run()
