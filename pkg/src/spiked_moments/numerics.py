"""Extended-precision scalar kernels shared by the moment and projection code.

Everything here works on :mod:`mpmath` ``mpf`` scalars at the *current*
``mp.prec``.  Callers fix the precision for a whole computation with
:func:`working_precision`; functions in this module never change it.

Matrices are plain nested lists (row-major).  :class:`SymMatrix` is a thin
validated wrapper used where symmetry is part of the contract.
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from mpmath import mp, mpf, fdot, sqrt, isfinite

__all__ = [
    "DEFAULT_PRECISION",
    "PRECISION_ENV",
    "InvalidInputError",
    "NotPositiveDefiniteError",
    "NoSignChangeError",
    "NoInteriorMinimumError",
    "UnboundedLPError",
    "SymMatrix",
    "Bracket",
    "LPSolution",
    "CuttingPlaneLP",
    "working_precision",
    "default_precision",
    "big",
    "cholesky",
    "ldl_inertia",
    "smallest_eigenpair",
    "gershgorin_bounds",
    "lp_interior",
    "bisect_boundary",
    "golden_minimize",
]

DEFAULT_PRECISION = 320
PRECISION_ENV = "SPIKED_PRECISION"


class InvalidInputError(ValueError):
    """Non-finite or malformed numerical input."""


class NotPositiveDefiniteError(ArithmeticError):
    """Cholesky factorisation met a non-positive pivot.

    ``direction`` is a unit vector ``x`` with ``x^T A x <= 0`` (up to
    rounding), built from the failed pivot column.
    """

    def __init__(self, pivot_index: int, pivot, direction: list):
        self.pivot_index = pivot_index
        self.pivot = pivot
        self.direction = direction
        super().__init__(f"non-positive pivot {mp.nstr(pivot, 8)} at index {pivot_index}")


class NoSignChangeError(ValueError):
    """The predicate (or function) has the same value at both bracket ends."""


class NoInteriorMinimumError(ValueError):
    """Golden-section search converged onto a bracket endpoint."""


class UnboundedLPError(ArithmeticError):
    """The max-min-slack LP has no finite optimum."""


def default_precision() -> int:
    """Precision in bits from ``$SPIKED_PRECISION`` or :data:`DEFAULT_PRECISION`."""
    raw = os.environ.get(PRECISION_ENV)
    if not raw:
        return DEFAULT_PRECISION
    bits = int(raw)
    if bits < 128:
        raise InvalidInputError(f"{PRECISION_ENV}={bits}: need at least 128 bits")
    return bits


@contextmanager
def working_precision(bits: int | None = None) -> Iterator[int]:
    """Run a block at ``bits`` of mantissa precision (restored on exit)."""
    bits = default_precision() if bits is None else int(bits)
    if bits < 128:
        raise InvalidInputError(f"precision {bits} bits is below the 128-bit floor")
    with mp.workprec(bits):
        yield bits


def big(x) -> mpf:
    """Convert ``x`` (str, int, float, mpf) to an ``mpf`` at current precision.

    Strings are parsed at full precision, so ``big("0.1")`` is the decimal
    value 1/10 rounded once, not the binary double nearest to it.
    """
    if isinstance(x, str) and x.strip().lower().lstrip("-").startswith("0x"):
        return _from_hex(x.strip())
    return mpf(x)


def _from_hex(text: str) -> mpf:
    # "[-]0x<hexmantissa>p<exp>" as written by records.hexify
    sign = -1 if text.startswith("-") else 1
    body = text.lstrip("-")[2:]
    man, _, exp = body.lower().partition("p")
    return sign * mp.ldexp(mpf(int(man, 16)), int(exp or 0))


@dataclass(frozen=True)
class SymMatrix:
    """Symmetric square matrix of mpf; only validated, never copied lazily."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise InvalidInputError("SymMatrix needs a non-empty square array")
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise InvalidInputError(f"entry ({i},{j}) differs from ({j},{i})")
        object.__setattr__(self, "rows", rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def tolist(self) -> list:
        return [list(r) for r in self.rows]


@dataclass(frozen=True)
class Bracket:
    lo: mpf
    hi: mpf
    tol: mpf = field(default_factory=lambda: mpf("1e-15"))

    def __post_init__(self):
        lo, hi, tol = mpf(self.lo), mpf(self.hi), mpf(self.tol)
        if not lo < hi:
            raise InvalidInputError(f"bracket needs lo < hi, got [{lo}, {hi}]")
        if not tol > 0:
            raise InvalidInputError("bracket tolerance must be positive")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "tol", tol)

    @property
    def width(self) -> mpf:
        return self.hi - self.lo


def _as_rows(A) -> list:
    if isinstance(A, SymMatrix):
        return A.tolist()
    if hasattr(A, "rows") and hasattr(A, "cols") and not isinstance(A, list):
        return [[A[i, j] for j in range(A.cols)] for i in range(A.rows)]
    rows = [list(r) for r in A]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise InvalidInputError("expected a non-empty square matrix")
    return rows


def _check_finite(rows: list) -> None:
    for r in rows:
        for v in r:
            if not isfinite(v):
                raise InvalidInputError("matrix has non-finite entries")


# ---------------------------------------------------------------------------
# Factorisations


def cholesky(A) -> list:
    """Lower-triangular ``L`` with ``L L^T = A``.

    Raises :class:`NotPositiveDefiniteError` at the first pivot that is not
    strictly positive.  The attached direction ``x`` satisfies
    ``x^T A x = pivot <= 0`` before normalisation: with the leading block
    ``A11 = L11 L11^T`` and failed column ``a``, ``x = (-L11^{-T} L11^{-1} a, 1)``.
    """
    rows = _as_rows(A)
    _check_finite(rows)
    n = len(rows)
    L = [[mpf(0)] * n for _ in range(n)]
    for i in range(n):
        Li = L[i]
        for j in range(i):
            Li[j] = (mpf(rows[i][j]) - fdot(Li[:j], L[j][:j])) / L[j][j]
        d = mpf(rows[i][i]) - fdot(Li[:i], Li[:i])
        if not d > 0:
            raise NotPositiveDefiniteError(i, d, _failure_direction(L, i))
        Li[i] = sqrt(d)
    return L


def _failure_direction(L: list, k: int) -> list:
    n = len(L)
    # back-substitute L11^T z = l, where l = L[k][:k] is the partial row
    z = [mpf(0)] * k
    for i in reversed(range(k)):
        s = L[k][i] - fdot([L[j][i] for j in range(i + 1, k)], z[i + 1:k])
        z[i] = s / L[i][i]
    x = [-v for v in z] + [mpf(1)] + [mpf(0)] * (n - k - 1)
    norm = sqrt(fdot(x, x))
    return [v / norm for v in x]


def ldl_inertia(rows: list, shift) -> int:
    """Number of eigenvalues of ``rows`` strictly below ``shift``.

    Counts negative pivots of an unpivoted LDL^T of ``A - shift*I``
    (Sylvester's law of inertia).  A zero pivot is nudged to a tiny negative
    value, which keeps the count consistent under bisection.
    """
    n = len(rows)
    tiny = mp.ldexp(mpf(1), -mp.prec + 8)
    D = [mpf(0)] * n
    L = [[mpf(0)] * n for _ in range(n)]
    count = 0
    for i in range(n):
        for j in range(i):
            s = rows[i][j] - fdot([L[i][k] * D[k] for k in range(j)], L[j][:j])
            L[i][j] = s / D[j]
        d = rows[i][i] - shift - fdot([L[i][k] * D[k] for k in range(i)], L[i][:i])
        if d == 0:
            d = -tiny * (abs(rows[i][i]) + abs(shift) + 1)
        D[i] = d
        if d < 0:
            count += 1
    return count


def gershgorin_bounds(rows: list) -> tuple[mpf, mpf]:
    lo = min(rows[i][i] - sum(abs(rows[i][j]) for j in range(len(rows)) if j != i)
             for i in range(len(rows)))
    hi = max(rows[i][i] + sum(abs(rows[i][j]) for j in range(len(rows)) if j != i)
             for i in range(len(rows)))
    return lo, hi


def _solve(rows: list, rhs: list) -> list:
    """Dense Gaussian elimination with partial pivoting."""
    n = len(rows)
    a = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    for c in range(n):
        p = max(range(c, n), key=lambda r: abs(a[r][c]))
        if a[p][c] == 0:
            a[p][c] = mp.ldexp(mpf(1), -mp.prec)
        a[c], a[p] = a[p], a[c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                for k in range(c, n + 1):
                    a[r][k] -= f * a[c][k]
    x = [mpf(0)] * n
    for r in reversed(range(n)):
        x[r] = (a[r][n] - fdot(a[r][r + 1:n], x[r + 1:])) / a[r][r]
    return x


def _matvec(rows: list, x: list) -> list:
    return [fdot(r, x) for r in rows]


def smallest_eigenpair(A) -> tuple[mpf, list]:
    """Minimum eigenvalue and a unit eigenvector of a symmetric matrix.

    The eigenvalue is isolated by inertia-count bisection inside the
    Gershgorin interval (geometric bisection when the matrix is positive
    definite, so tiny eigenvalues of badly scaled matrices cost few steps),
    then polished by shifted inverse iteration with a Rayleigh quotient.
    """
    rows = _as_rows(A)
    _check_finite(rows)
    n = len(rows)
    rows = [[mpf(v) for v in r] for r in rows]
    if n == 1:
        return rows[0][0], [mpf(1)]
    lo, hi = gershgorin_bounds(rows)
    scale = max(abs(lo), abs(hi), mpf(1))
    floor = mp.ldexp(scale, -mp.prec + 8)
    rel = mp.ldexp(mpf(1), -30)
    if ldl_inertia(rows, 0) == 0:
        # positive definite: lam_min in (0, hi]
        lo = floor
        if ldl_inertia(rows, lo) >= 1:
            lo = mpf(0)
        else:
            while hi > lo * (1 + rel):
                mid = sqrt(lo * hi)
                if ldl_inertia(rows, mid) >= 1:
                    hi = mid
                else:
                    lo = mid
    while hi - lo > max(rel * max(abs(lo), abs(hi)), floor):
        mid = (lo + hi) / 2
        if ldl_inertia(rows, mid) >= 1:
            hi = mid
        else:
            lo = mid
    # lo <= lam_min, so inverse iteration at lo converges to the minimum pair
    shift = lo - floor
    x = [mpf(1) / sqrt(n)] * n
    lam = lo
    for _ in range(12):
        shifted = [[rows[i][j] - (shift if i == j else 0) for j in range(n)] for i in range(n)]
        y = _solve(shifted, x)
        norm = sqrt(fdot(y, y))
        x = [v / norm for v in y]
        Ax = _matvec(rows, x)
        lam = fdot(x, Ax)
        r = [a - lam * b for a, b in zip(Ax, x)]
        if sqrt(fdot(r, r)) <= floor * 256:
            break
        shift = lam - floor
    k = max(range(n), key=lambda i: abs(x[i]))
    if x[k] < 0:
        x = [-v for v in x]
    return lam, x


# ---------------------------------------------------------------------------
# Max-min-slack LP on the normalisation slice  sum(u) = 1


@dataclass
class LPSolution:
    """Result of :func:`lp_interior`.  ``feasible`` means ``slack > 0``."""

    feasible: bool
    point: list
    slack: mpf
    multipliers: list = field(default_factory=list)


class CuttingPlaneLP:
    """Incremental LP: maximise ``t`` s.t. ``a_i . u >= t`` and ``sum(u) = 1``.

    Internally the dual

        min  sum_i c_i w_i   s.t.  sum_i w_i = 1,  sum_i w_i a'_i = 0,  w >= 0

    is solved by a revised simplex (Dantzig pricing, Bland's rule after
    degenerate stalls), where ``u_0`` has been
    eliminated (``c_i = a_i0``, ``a'_i = a_i[1:] - a_i0``).  Cuts append
    columns, so the previous optimal basis stays primal feasible for the dual
    and re-solving after a cut is usually a handful of pivots.
    """

    def __init__(self, dim: int):
        if dim < 1:
            raise InvalidInputError("LP dimension must be >= 1")
        self.dim = dim  # number of u components
        self.cols: list[list] = []  # dual constraint columns [1, a'_i]
        self.costs: list = []
        self._basis: list[int] | None = None
        self._binv: list[list] | None = None
        self._art = 0  # artificial columns live at the front while in phase 1

    def __len__(self) -> int:
        return len(self.cols)

    def add(self, a: Sequence) -> None:
        if len(a) != self.dim:
            raise InvalidInputError(f"cut has {len(a)} coefficients, expected {self.dim}")
        a = [mpf(v) for v in a]
        norm = sqrt(fdot(a, a))
        if norm == 0:
            return
        a = [v / norm for v in a]
        self.cols.append([mpf(1)] + [v - a[0] for v in a[1:]])
        self.costs.append(a[0])

    # -- simplex helpers
    def _column(self, j: int) -> list:
        return self.cols[j]

    def _tol(self) -> mpf:
        return mp.ldexp(mpf(1), -int(mp.prec * 0.8))

    def _pivot(self, r: int, col: list, j: int) -> None:
        binv = self._binv
        m = self.dim
        d = [fdot(binv[i], col) for i in range(m)]
        piv = d[r]
        newr = [v / piv for v in binv[r]]
        for i in range(m):
            if i != r and d[i]:
                f = d[i]
                binv[i] = [a - f * b for a, b in zip(binv[i], newr)]
        binv[r] = newr
        self._basis[r] = j

    def _run(self, cost_of, col_of, ncols: int, allowed) -> None:
        m = self.dim
        tol = self._tol()
        rhs = [mpf(1)] + [mpf(0)] * (m - 1)
        stalls = 0
        for _ in range(50 * (ncols + m) + 100):
            cb = [cost_of(j) for j in self._basis]
            pi = [fdot(cb, [self._binv[i][k] for i in range(m)]) for k in range(m)]
            enter, best_rc = None, -tol
            basis = set(self._basis)
            for j in range(ncols):
                if j in basis or not allowed(j):
                    continue
                rc = cost_of(j) - fdot(pi, col_of(j))
                if rc < best_rc:
                    enter, best_rc = j, rc
                    if stalls > 2 * m:
                        break  # Bland's lowest index once pivots stop making progress
            if enter is None:
                return
            col = col_of(enter)
            d = [fdot(self._binv[i], col) for i in range(m)]
            xb = [fdot(self._binv[i], rhs) for i in range(m)]
            best = None
            for i in range(m):
                if d[i] > tol:
                    ratio = xb[i] / d[i]
                    key = (ratio, self._basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise UnboundedLPError("dual unbounded: cut set is contradictory")
            stalls = stalls + 1 if best[0][0] <= tol else 0
            self._pivot(best[1], col, enter)
        raise ArithmeticError("simplex iteration cap reached (cycling?)")

    def solve(self) -> LPSolution:
        m = self.dim
        if not self.cols:
            raise UnboundedLPError("no cuts: the slack is unbounded")
        if m == 1:
            t = min(self.costs)
            return LPSolution(bool(t > 0), [mpf(1)], t, [])
        if self._basis is None:
            self._phase_one()
        ncols = len(self.cols)
        self._run(lambda j: self.costs[j], self._column, ncols, lambda j: True)
        cb = [self.costs[j] for j in self._basis]
        pi = [fdot(cb, [self._binv[i][k] for i in range(m)]) for k in range(m)]
        t = pi[0]
        y = [-v for v in pi[1:]]
        u = [1 - sum(y)] + y
        rhs = [mpf(1)] + [mpf(0)] * (m - 1)
        w = [fdot(self._binv[i], rhs) for i in range(m)]
        return LPSolution(bool(t > 0), u, t, list(zip(self._basis, w)))

    def _phase_one(self) -> None:
        m = self.dim
        ncols = len(self.cols)
        # artificials are columns ncols .. ncols+m-1 (identity); cost 1
        ident = [[mpf(int(i == k)) for k in range(m)] for i in range(m)]
        col_of = lambda j: self.cols[j] if j < ncols else ident[j - ncols]
        cost_of = lambda j: mpf(0) if j < ncols else mpf(1)
        self._basis = [ncols + i for i in range(m)]
        self._binv = [list(r) for r in ident]
        self._run(cost_of, col_of, ncols + m, lambda j: True)
        rhs = [mpf(1)] + [mpf(0)] * (m - 1)
        xb = [fdot(self._binv[i], rhs) for i in range(m)]
        if any(self._basis[i] >= ncols and xb[i] > self._tol() for i in range(m)):
            self._basis = None
            raise UnboundedLPError("dual infeasible: max-min slack is unbounded")
        # drive zero-level artificials out of the basis
        for i in range(m):
            if self._basis[i] >= ncols:
                for j in range(ncols):
                    if j in self._basis:
                        continue
                    if abs(fdot(self._binv[i], self.cols[j])) > self._tol():
                        self._pivot(i, self.cols[j], j)
                        break
                else:
                    self._basis = None
                    raise UnboundedLPError("cut directions do not span the slice")


def lp_interior(ineqs: Sequence[Sequence]) -> LPSolution:
    """Point on ``sum(u) = 1`` maximising the minimum normalised slack.

    Each inequality is a coefficient vector ``a`` meaning ``a . u > 0``;
    coefficients are scaled to unit Euclidean norm first.  The returned
    solution is feasible when the optimal minimum slack is strictly
    positive; otherwise the open polytope is empty.
    """
    ineqs = [list(a) for a in ineqs]
    if not ineqs:
        raise UnboundedLPError("no inequalities")
    lp = CuttingPlaneLP(len(ineqs[0]))
    for a in ineqs:
        lp.add(a)
    return lp.solve()


# ---------------------------------------------------------------------------
# One-dimensional searches


def bisect_boundary(f: Callable[[mpf], bool], bracket: Bracket) -> mpf:
    """Locate where the boolean predicate ``f`` flips inside ``bracket``.

    Returns the midpoint of the final sub-bracket, whose half-width is at
    most ``bracket.tol``.
    """
    lo, hi = bracket.lo, bracket.hi
    flo, fhi = bool(f(lo)), bool(f(hi))
    if flo == fhi:
        raise NoSignChangeError(f"predicate is {flo} at both ends of [{lo}, {hi}]")
    while (hi - lo) / 2 > bracket.tol:
        mid = (lo + hi) / 2
        if mid == lo or mid == hi:
            break
        if bool(f(mid)) == flo:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def golden_minimize(f: Callable[[mpf], mpf], bracket: Bracket) -> tuple[mpf, mpf]:
    """Golden-section search for the minimum of a unimodal ``f``."""
    invphi = (sqrt(5) - 1) / 2
    a, b = bracket.lo, bracket.hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) / 2 > bracket.tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = (a + b) / 2
    fx = f(x)
    edge = 4 * bracket.tol
    if x - bracket.lo <= edge or bracket.hi - x <= edge:
        raise NoInteriorMinimumError(f"minimum runs into the bracket edge near {mp.nstr(x, 12)}")
    return x, fx
