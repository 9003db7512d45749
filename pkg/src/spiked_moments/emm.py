"""Eigenvalue moment method: certified energy bounds from Hankel positivity.

For a trial energy ``E`` every moment is a linear form in the missing
moments ``u``.  If the configuration behind the moments is non-negative, the
two Hankel matrices ``H_s(i, j) = moment(i + j + s)`` (``s = 0, 1``) are
positive definite.  ``E`` is *feasible* at order ``p_max`` when some ``u``
with ``sum(u) = 1`` makes both matrices positive definite; the physical
energy is always feasible, so the feasible set brackets it.

Feasibility is decided exactly for ``m_s = 0`` (one Cholesky per matrix).
Otherwise a cutting-plane loop maximises the smallest normalised slack over
linear cuts ``x^T H(u) x >= t``; the cuts come from Cholesky failure
directions at the current LP point.  A non-positive optimal slack certifies
infeasibility and a successful Cholesky at the LP point certifies
feasibility.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from mpmath import mp, mpf, fdot, sqrt, matrix, eigsy

from .model import DegenerateEnergyError, Problem, Representation, build_generator
from .numerics import (
    Bracket,
    CuttingPlaneLP,
    NotPositiveDefiniteError,
    UnboundedLPError,
    big,
    bisect_boundary,
    cholesky,
)

__all__ = [
    "Verdict",
    "Feasibility",
    "EnergyInterval",
    "EmptyWindowError",
    "ResolutionError",
    "hankel_forms",
    "feasibility",
    "margin",
    "energy_bounds",
    "ground_bounds",
    "psi2_state_bounds",
    "degenerate_energies",
    "algebraic_ground_check",
]


class EmptyWindowError(ArithmeticError):
    """No feasible energy was found inside the scan window."""


class ResolutionError(ArithmeticError):
    """The scan window holds several feasible islands at the final order."""


class Verdict(str, enum.Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    INDETERMINATE = "indeterminate"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class Feasibility:
    verdict: Verdict
    witness: tuple = ()
    slack: mpf | None = None
    cuts: int = 0
    directions: tuple = ()  # (matrix index, unit vector) pairs that produced cuts

    @property
    def feasible(self) -> bool:
        """Conservative reading: only a certified infeasibility excludes ``E``."""
        return self.verdict is not Verdict.INFEASIBLE


@dataclass(frozen=True)
class EnergyInterval:
    E_L: mpf
    E_U: mpf
    method: str
    order: int
    state: int = 0
    precision_bits: int = 0
    clipped_low: bool = False
    clipped_high: bool = False

    def __post_init__(self):
        if self.E_L > self.E_U:
            raise ValueError("interval needs E_L <= E_U")

    @property
    def width(self) -> mpf:
        return self.E_U - self.E_L

    @property
    def midpoint(self) -> mpf:
        return (self.E_L + self.E_U) / 2

    def contains(self, E) -> bool:
        return self.E_L <= big(E) <= self.E_U

    def overlaps(self, lo, hi) -> bool:
        return self.E_L <= big(hi) and big(lo) <= self.E_U


# ---------------------------------------------------------------------------
# Hankel constraints


@dataclass(frozen=True)
class _Forms:
    # forms[s][i][j] is the coefficient vector of H_s(i, j); scale[s][i] = D_i
    forms: tuple
    scale: tuple
    m_s: int


def hankel_forms(problem: Problem, E, p_max: int) -> _Forms:
    """Diagonally scaled Hankel matrices as linear forms in the missing moments."""
    table = build_generator(problem, E, p_max)
    forms, scales = [], []
    for s in (0, 1):
        size = (p_max - s) // 2 + 1
        D = []
        for i in range(size):
            peak = max(abs(v) for v in table.M[2 * i + s])
            D.append(1 / sqrt(peak) if peak else mpf(1))
        forms.append(tuple(
            tuple(tuple(v * D[i] * D[j] for v in table.M[i + j + s]) for j in range(size))
            for i in range(size)))
        scales.append(tuple(D))
    return _Forms(tuple(forms), tuple(scales), table.m_s)


def _evaluate(form, u) -> list:
    return [[fdot(entry, u) for entry in row] for row in form]


def _cut(form, x) -> list:
    # coefficients of x^T H(u) x as a linear form in u
    n, k = len(form), len(form[0][0])
    out = [mpf(0)] * k
    for i in range(n):
        if not x[i]:
            continue
        for j in range(n):
            if not x[j]:
                continue
            w = x[i] * x[j]
            for l in range(k):
                out[l] += w * form[i][j][l]
    return out


def _negative_directions(H: list, limit: int = 3) -> list:
    # eigenvectors of the most negative eigenvalues, in double precision;
    # any direction yields a valid cut, so rounding here only affects speed
    A = np.array([[float(v) for v in row] for row in H])
    if not np.all(np.isfinite(A)):
        return []
    vals, vecs = np.linalg.eigh(A)
    out = []
    for k in range(min(limit, len(vals))):
        if vals[k] >= 0:
            break
        out.append(tuple(mpf(float(c)) for c in vecs[:, k]))
    return out


def feasibility(problem: Problem, E, p_max: int, max_cuts: int = 400,
                seeds: tuple = ()) -> Feasibility:
    """Decide whether ``E`` survives the Hankel tests up to moment ``p_max``.

    ``seeds`` are cut directions from a nearby energy (the ``directions`` of
    an earlier result at the same order); they only speed up convergence.
    """
    try:
        forms = hankel_forms(problem, E, p_max)
    except DegenerateEnergyError:
        return Feasibility(Verdict.DEGENERATE)
    dim = forms.m_s + 1
    mats = [f for f in forms.forms if f]
    if dim == 1:
        u = [mpf(1)]
        for f in mats:
            try:
                cholesky(_evaluate(f, u))
            except NotPositiveDefiniteError:
                return Feasibility(Verdict.INFEASIBLE)
        return Feasibility(Verdict.FEASIBLE, (mpf(1),))
    lp = CuttingPlaneLP(dim)
    for f in mats:
        for i in range(len(f)):
            lp.add(f[i][i])
    used = []
    for k, x in seeds:
        if k < len(mats) and len(x) == len(mats[k]):
            lp.add(_cut(mats[k], x))
            used.append((k, x))
    for _ in range(max_cuts):
        try:
            sol = lp.solve()
        except UnboundedLPError:
            return Feasibility(Verdict.INDETERMINATE, cuts=len(lp), directions=tuple(used))
        if not sol.feasible:
            return Feasibility(Verdict.INFEASIBLE, slack=sol.slack, cuts=len(lp),
                               directions=tuple(used))
        failed = False
        for k, f in enumerate(mats):
            H = _evaluate(f, sol.point)
            try:
                cholesky(H)
            except NotPositiveDefiniteError as exc:
                for x in [tuple(exc.direction)] + _negative_directions(H):
                    lp.add(_cut(f, x))
                    used.append((k, x))
                failed = True
        if not failed:
            return Feasibility(Verdict.FEASIBLE, tuple(sol.point), sol.slack, len(lp),
                               tuple(used))
    return Feasibility(Verdict.INDETERMINATE, cuts=len(lp), directions=tuple(used))


def _min_eig(rows: list) -> mpf:
    vals, _ = eigsy(matrix(rows), eigvals_only=False)
    return min(vals)


def _margin_at(forms: _Forms, u) -> mpf:
    return min(_min_eig(_evaluate(f, u)) for f in forms.forms if f)


def margin(problem: Problem, E, p_max: int) -> mpf:
    """Smooth feasibility score: the best smallest eigenvalue of the scaled Hankels.

    Positive exactly where ``E`` is feasible (up to rounding).  Defined for
    ``m_s <= 1``, where the search over ``u`` is one concave maximisation.
    """
    try:
        forms = hankel_forms(problem, E, p_max)
    except DegenerateEnergyError:
        return mpf(0)
    if forms.m_s == 0:
        return _margin_at(forms, [mpf(1)])
    if forms.m_s > 1:
        raise ValueError("margin is only available for m_s <= 1")
    f = lambda s: _margin_at(forms, [1 - s, s])
    lo, hi = mpf(0), mpf(1)
    invphi = (sqrt(5) - 1) / 2
    c, d = hi - invphi * (hi - lo), lo + invphi * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(80):
        if max(fc, fd) > 0:
            break
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = f(d)
    return max(fc, fd)


# ---------------------------------------------------------------------------
# Window search


def degenerate_energies(problem: Problem, lo, hi, p_max: int) -> list:
    """Energies in ``[lo, hi]`` where a PHI recursion step loses its leading term."""
    if problem.representation is not Representation.PHI:
        return []
    if problem.sigma == 0:
        cands = [mpf(2 * n + 1) / 2 for n in range(p_max)]
    else:
        cands = [mpf(2 + n) for n in range(p_max)]
    return [E for E in cands if big(lo) <= E <= big(hi)]


def _grid(lo, hi, n: int) -> list:
    return [lo + (hi - lo) * k / n for k in range(n + 1)]


SEED_CUTS = 12


class _Oracle:
    # memoised feasibility at one order, threading recent cut directions
    # from each evaluation into the next
    def __init__(self, problem: Problem):
        self.problem = problem
        self.cache: dict = {}
        self.seeds: dict = {}

    def verdict(self, E, p_max: int) -> Verdict:
        key = (E, p_max)
        if key not in self.cache:
            res = feasibility(self.problem, E, p_max, seeds=self.seeds.get(p_max, ()))
            if res.directions:
                self.seeds[p_max] = res.directions[-SEED_CUTS:]
            self.cache[key] = res.verdict
        return self.cache[key]

    def feasible(self, E, p_max: int) -> bool:
        return self.verdict(E, p_max) is not Verdict.INFEASIBLE


def _classify(oracle: _Oracle, grid, p_max) -> list:
    return [oracle.verdict(E, p_max) for E in grid]


def _runs(flags: list) -> list:
    runs, start = [], None
    for k, f in enumerate(flags + [False]):
        if f and start is None:
            start = k
        elif not f and start is not None:
            runs.append((start, k - 1))
            start = None
    return runs


def _zoom_by_margin(problem, lo, hi, p_max, points=16, rounds=40):
    # maximise the margin by repeated grid zoom until it turns positive
    for _ in range(rounds):
        grid = _grid(lo, hi, points)
        scores = [margin(problem, E, p_max) for E in grid]
        k = max(range(len(grid)), key=lambda i: scores[i])
        if scores[k] > 0 and feasibility(problem, grid[k], p_max).verdict is Verdict.FEASIBLE:
            return grid[k]
        lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, points)]
    return None


def energy_bounds(problem: Problem, p_max: int, scan, state: int = 0, points: int | None = None,
                  start_order: int | None = None, step: int = 2, tol=1e-15) -> EnergyInterval:
    """Feasible interval at order ``p_max`` inside ``scan``.

    Orders climb from ``start_order`` to ``p_max``.  The feasible set can only
    shrink as the order grows, so each order is scanned on a grid over the
    hull of the previous feasible points padded by one grid step.  A grid
    that misses the (narrowing) set is refined; for ``m_s <= 1`` a margin
    zoom is the last resort.  The final edges are bisected to ``tol``.
    ``state`` selects among disjoint feasible islands of the starting scan.
    """
    lo, hi = big(scan[0]), big(scan[1])
    if not lo < hi:
        raise ValueError("scan needs lo < hi")
    m_s = problem.missing_order
    if start_order is None:
        # cutting-plane evaluations are costly, so the LP path starts late
        start_order = max(m_s + 2, 2) if m_s <= 1 else max(m_s + 2, p_max - 12)
    if points is None:
        points = 32 if m_s <= 1 else 16
    first = start_order
    orders = list(range(min(first, p_max), p_max, step)) + [p_max]
    oracle = _Oracle(problem)
    island_chosen = False
    for P in orders:
        final = P == p_max
        grid, verdicts = None, None
        for refine in range(2 if m_s <= 1 else 4):
            grid = _grid(lo, hi, points * 8 ** refine)
            verdicts = _classify(oracle, grid, P)
            if any(v in (Verdict.FEASIBLE, Verdict.INDETERMINATE) for v in verdicts):
                break
        flags = [v in (Verdict.FEASIBLE, Verdict.INDETERMINATE) for v in verdicts]
        if not any(flags):
            isolated = _isolated_point(problem, lo, hi, P)
            if isolated is not None:
                if final:
                    return EnergyInterval(isolated, isolated, f"emm-{problem.label}", p_max,
                                          state, mp.prec)
                continue
            hit = None
            if m_s <= 1:
                hit = _zoom_by_margin(problem, lo, hi, P)
            if hit is None:
                raise EmptyWindowError(
                    f"no feasible energy in [{mp.nstr(lo, 17)}, {mp.nstr(hi, 17)}] at order {P}")
            width = (hi - lo) / (points * 64)
            lo, hi = hit - width, hit + width
            grid = _grid(lo, hi, points)
            flags = [v in (Verdict.FEASIBLE, Verdict.INDETERMINATE)
                     for v in _classify(oracle, grid, P)]
        runs = _runs(flags)
        if not island_chosen and len(runs) > 1:
            if state >= len(runs):
                raise ResolutionError(f"only {len(runs)} feasible islands at order {P}")
            runs = [runs[state]]
        if len(runs) > 1 and final:
            raise ResolutionError(f"{len(runs)} feasible islands remain at order {p_max}")
        island_chosen = island_chosen or len(runs) == 1
        a, z = runs[0][0], runs[-1][1]
        if final:
            return _polish(oracle, p_max, grid, a, z, state, tol)
        lo, hi = grid[max(a - 1, 0)], grid[min(z + 1, len(grid) - 1)]
    raise AssertionError("unreachable")


def _isolated_point(problem, lo, hi, P):
    for E in degenerate_energies(problem, lo, hi, P):
        if feasibility(problem, E, P).verdict is Verdict.FEASIBLE:
            return E
    return None


def _polish(oracle: _Oracle, p_max, grid, a, z, state, tol) -> EnergyInterval:
    problem = oracle.problem
    ok = lambda E: oracle.feasible(E, p_max)
    last = len(grid) - 1
    if a == 0:
        E_L = grid[0]
    else:
        E_L = bisect_boundary(ok, Bracket(grid[a - 1], grid[a], tol))
    if z == last:
        E_U = grid[last]
    else:
        E_U = bisect_boundary(ok, Bracket(grid[z], grid[z + 1], tol))
    return EnergyInterval(E_L, E_U, f"emm-{problem.label}", p_max, state, mp.prec,
                          clipped_low=a == 0, clipped_high=z == last)


DEFAULT_GROUND_SCAN = (mpf("0.45"), mpf("2.5"))


def ground_bounds(problem: Problem, p_max: int, scan=None, **kw) -> EnergyInterval:
    """Ground-state interval; the default scan covers every ``b >= 0``."""
    if problem.representation is Representation.PSI2:
        raise ValueError("use psi2_state_bounds for the density representation")
    return energy_bounds(problem, p_max, scan or DEFAULT_GROUND_SCAN, 0, **kw)


def psi2_state_bounds(b, state: int, p_max: int, scan, **kw) -> EnergyInterval:
    """Bounds for the ``state``-th level from the density moments.

    ``scan`` should isolate the level; when it holds several islands at the
    starting order, ``state`` counts islands from the bottom of ``scan``.
    """
    problem = Problem(big(b), Representation.PSI2)
    return energy_bounds(problem, p_max, scan, state, **kw)


def algebraic_ground_check(E) -> bool:
    """Ground energies lie in ``(1/2, 2]`` for every ``b >= 0``."""
    E = big(E)
    return mpf(1) / 2 < E <= 2
