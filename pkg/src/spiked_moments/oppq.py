"""Orthonormal-polynomial projection quantization.

The eigenfunction is expanded as ``Psi = chi^2 * sum_n c_n P_n(chi) R(chi)``
with ``P_n`` orthonormal for the weight ``R = chi^-1/2 exp(-(chi-b)^2/2)``.
Each projection coefficient is linear in the four missing PSI moments:

    c_n = Lambda_n(E) . u,   Lambda_n(E)_l = sum_j Xi[n][j] M_E(j, l),

where ``Xi`` holds the monomial coefficients of the ``P_n``.  Requiring
``c_n`` to vanish for the last four orders gives a 4x4 determinant whose
roots approximate energies (the *algebraic* route).  Minimising the sum of
squared coefficients over unit-sum ``u`` gives the smallest eigenvalue of a
4x4 dyad sum; its dips locate energies and its level sets bound them (the
*variational* route).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from mpmath import mp, mpf, fdot, sqrt, exp, log10, matrix, det, eigsy

from .model import Problem, Representation, build_generator, weight_moments
from .numerics import (
    Bracket,
    NotPositiveDefiniteError,
    NoInteriorMinimumError,
    big,
    bisect_boundary,
    cholesky,
    golden_minimize,
    smallest_eigenpair,
)

__all__ = [
    "PrecisionExhaustedError",
    "AmbiguousStateError",
    "OrthoBasis",
    "Eigencurve",
    "BoundInterval",
    "Reconstruction",
    "required_precision",
    "build_basis",
    "orthonormality_residual",
    "lambda_rows",
    "am_determinant",
    "am_energies",
    "bm_eigenvalue",
    "bm_curve",
    "bm_minimum",
    "bm_bounds",
    "reconstruct",
    "sweep_energies",
]


class PrecisionExhaustedError(ArithmeticError):
    """The weight Hankel matrix is not numerically positive definite."""


class AmbiguousStateError(ArithmeticError):
    """The null space of the quantization matrix is not one-dimensional."""


def required_precision(order: int, b=0) -> int:
    """Bits needed for a projection of ``order`` at displacement ``b``.

    The weight Hankel matrix loses roughly ``2.2 * order`` bits in its
    Cholesky factor and the dyad sum squares coefficients that grow like
    the inverse factor, so the budget grows linearly in both.
    """
    return int(math.ceil(4 * order + 12 * float(b) + 192))


# ---------------------------------------------------------------------------
# Orthonormal basis


@dataclass(frozen=True)
class OrthoBasis:
    """``P_n(chi) = sum_{j<=n} xi[n][j] chi^j`` for ``n < size``."""

    b: mpf
    xi: tuple
    omega: tuple
    precision_bits: int

    @property
    def size(self) -> int:
        return len(self.xi)

    def evaluate(self, coeffs, chi) -> mpf:
        """``sum_n coeffs[n] P_n(chi)`` via one Horner pass."""
        n = len(coeffs)
        mono = [fdot([coeffs[k] for k in range(j, n)], [self.xi[k][j] for k in range(j, n)])
                for j in range(n)]
        acc = mpf(0)
        for a in reversed(mono):
            acc = acc * chi + a
        return acc


def _factor_bits(size: int, b, prec: int) -> int:
    return max(prec, required_precision(size - 1, b))


@lru_cache(maxsize=16)
def _cached_basis(b: mpf, size: int, prec: int) -> OrthoBasis:
    inner = _factor_bits(size, b, prec)
    with mp.workprec(inner):
        w = weight_moments(b, 2 * size - 2).omega
        H = [[w[i + j] for j in range(size)] for i in range(size)]
        try:
            L = cholesky(H)
        except NotPositiveDefiniteError as exc:
            raise PrecisionExhaustedError(
                f"weight Hankel of size {size} fails at pivot {exc.pivot_index} "
                f"with {inner} bits") from None
        xi = [[mpf(0)] * size for _ in range(size)]
        for i in range(size):
            xi[i][i] = 1 / L[i][i]
            for j in range(i):
                xi[i][j] = -fdot(L[i][j:i], [xi[k][j] for k in range(j, i)]) / L[i][i]
    # unary plus rounds to the caller's precision
    xi = tuple(tuple(+v for v in r[: i + 1]) for i, r in enumerate(xi))
    return OrthoBasis(b, xi, tuple(+v for v in w), prec)


def build_basis(b, size: int) -> OrthoBasis:
    """Orthonormal polynomials ``P_0 .. P_{size-1}`` rounded to the current precision.

    The factorisation itself runs with guard bits (see
    :func:`required_precision`), since the weight Hankel matrix is badly
    conditioned and a same-precision Cholesky would lose most digits.
    """
    if size < 1:
        raise ValueError("basis size must be >= 1")
    return _cached_basis(big(b), size, mp.prec)


def orthonormality_residual(basis: OrthoBasis, rows=None) -> mpf:
    """``max |<P_m, P_n> - delta_mn|`` over ``rows`` (default: all).

    The Gram entries are evaluated with guard bits and freshly computed
    weight moments, so the result measures the stored polynomials rather
    than rounding inside the check.
    """
    rows = range(basis.size) if rows is None else rows
    worst = mpf(0)
    with mp.workprec(_factor_bits(basis.size, basis.b, basis.precision_bits) + 64):
        w = weight_moments(basis.b, 2 * basis.size - 2).omega
        for m in rows:
            xm = basis.xi[m]
            # moments of P_m against every monomial, then project on P_n
            mom = [fdot(xm, w[k : k + m + 1]) for k in range(basis.size)]
            for n in range(basis.size):
                g = fdot(basis.xi[n], mom[: n + 1])
                worst = max(worst, abs(g - (1 if m == n else 0)))
    return +worst


# ---------------------------------------------------------------------------
# Projection coefficients


def _psi_problem(b) -> Problem:
    return Problem(big(b), Representation.PSI)


def lambda_rows(basis: OrthoBasis, E, orders) -> list:
    """``Lambda_n(E)`` (four components each) for every ``n`` in ``orders``."""
    orders = list(orders)
    top = max(orders)
    if top >= basis.size:
        raise ValueError(f"order {top} needs a basis of size {top + 1}")
    table = build_generator(_psi_problem(basis.b), E, max(top, 4))
    cols = [[table.M[j][l] for j in range(top + 1)] for l in range(4)]
    return [[fdot(basis.xi[n], cols[l][: n + 1]) for l in range(4)] for n in orders]


def _am_matrix(basis: OrthoBasis, E, order: int) -> list:
    return lambda_rows(basis, E, [order - k for k in range(4)])


def am_determinant(b, order: int, E, basis: OrthoBasis | None = None) -> mpf:
    """Determinant of the rows ``Lambda_{order-k}``, ``k = 0..3``."""
    if order < 3:
        raise ValueError("the algebraic condition needs order >= 3")
    basis = basis or build_basis(b, order + 1)
    return det(matrix(_am_matrix(basis, E, order)))


def am_energies(b, order: int, scan: tuple = (0.4, 9.0), step=0.01, tol=1e-15,
                basis: OrthoBasis | None = None) -> list:
    """Real roots of the algebraic determinant inside ``scan``, ascending.

    Sign changes are detected on a uniform grid of spacing ``step`` and each
    one is refined by bisection to ``tol``.  Roots closer than ``step`` to
    one another, or of even multiplicity, are not resolved.
    """
    basis = basis or build_basis(b, order + 1)
    lo, hi = big(scan[0]), big(scan[1])
    n = max(2, int(math.ceil(float((hi - lo) / big(step)))))
    grid = [lo + (hi - lo) * k / n for k in range(n + 1)]
    f = lambda E: am_determinant(b, order, E, basis)
    vals = [f(E) for E in grid]
    roots = []
    for k in range(n):
        if vals[k] == 0:
            roots.append(grid[k])
        elif vals[k] * vals[k + 1] < 0:
            positive = vals[k] > 0
            roots.append(bisect_boundary(lambda E: (f(E) > 0) == positive,
                                         Bracket(grid[k], grid[k + 1], tol)))
    if vals[n] == 0:
        roots.append(grid[n])
    return roots


def _dyad_sum(rows: list) -> list:
    return [[fdot([r[a] for r in rows], [r[c] for r in rows]) for c in range(4)] for a in range(4)]


def bm_eigenvalue(b, order: int, E, basis: OrthoBasis | None = None) -> mpf:
    """Smallest eigenvalue of ``sum_{n<=order} Lambda_n Lambda_n^T``."""
    basis = basis or build_basis(b, order + 1)
    rows = lambda_rows(basis, E, range(order + 1))
    lam, _ = smallest_eigenpair(_dyad_sum(rows))
    return lam


@dataclass(frozen=True)
class Eigencurve:
    b: mpf
    order: int
    energies: tuple
    values: tuple
    minima: tuple = ()  # (E_min, lambda_min) pairs, ascending in E

    def log10_values(self) -> list:
        return [log10(v) for v in self.values]


def bm_minimum(b, order: int, window: tuple, tol=1e-13, basis: OrthoBasis | None = None):
    """Interior minimum ``(E, lambda)`` of the eigencurve inside ``window``."""
    basis = basis or build_basis(b, order + 1)
    f = lambda E: bm_eigenvalue(b, order, E, basis)
    return golden_minimize(f, Bracket(big(window[0]), big(window[1]), tol))


def bm_curve(b, order: int, energies, refine=True, tol=1e-13,
             basis: OrthoBasis | None = None) -> Eigencurve:
    """Sample the eigencurve and (optionally) polish its interior minima."""
    basis = basis or build_basis(b, order + 1)
    energies = [big(E) for E in energies]
    values = [bm_eigenvalue(b, order, E, basis) for E in energies]
    minima = []
    for k in range(1, len(energies) - 1):
        if values[k] < values[k - 1] and values[k] <= values[k + 1]:
            if not refine:
                minima.append((energies[k], values[k]))
                continue
            try:
                minima.append(bm_minimum(b, order, (energies[k - 1], energies[k + 1]), tol, basis))
            except NoInteriorMinimumError:
                minima.append((energies[k], values[k]))
    return Eigencurve(big(b), order, tuple(energies), tuple(values), tuple(minima))


@dataclass(frozen=True)
class BoundInterval:
    E_L: mpf
    E_U: mpf
    E_min: mpf
    lambda_min: mpf
    bound: mpf
    order: int
    precision_bits: int

    @property
    def width(self) -> mpf:
        return self.E_U - self.E_L


def _outward_crossing(f, start, direction: int, level, step, tol) -> mpf:
    # march away from a sub-level point with doubling steps, then bisect
    inner = start
    h = big(step)
    for _ in range(200):
        outer = inner + direction * h
        if f(outer) > level:
            lo, hi = sorted((inner, outer))
            below = lambda E: f(E) <= level
            return bisect_boundary(below, Bracket(lo, hi, tol))
        inner = outer
        h *= 2
    raise ArithmeticError("eigencurve never rises above the bound")


def bm_bounds(b, order: int, bound, window: tuple, tol=1e-15, first_step=1e-12,
              basis: OrthoBasis | None = None) -> BoundInterval:
    """Energy interval where the eigencurve stays below ``bound``.

    ``window`` must contain exactly one interior minimum of the curve; the
    interval grows outward from it on both sides.
    """
    basis = basis or build_basis(b, order + 1)
    bound = big(bound)
    E_min, lam_min = bm_minimum(b, order, window, basis=basis)
    if lam_min > bound:
        raise ValueError(f"curve minimum {mp.nstr(lam_min, 8)} lies above the bound "
                         f"{mp.nstr(bound, 8)}; no interval exists")
    f = lambda E: bm_eigenvalue(b, order, E, basis)
    E_L = _outward_crossing(f, E_min, -1, bound, first_step, tol)
    E_U = _outward_crossing(f, E_min, +1, bound, first_step, tol)
    return BoundInterval(E_L, E_U, E_min, lam_min, bound, order, mp.prec)


# ---------------------------------------------------------------------------
# Wavefunction reconstruction


@dataclass(frozen=True)
class Reconstruction:
    b: mpf
    E: mpf
    grid: tuple
    values: tuple
    coefficients: tuple
    missing: tuple

    def sign_changes(self, rel_floor=1e-6) -> int:
        """Sign changes of the sampled function, ignoring negligible tails."""
        peak = max(abs(v) for v in self.values)
        signs = [v > 0 for v in self.values if abs(v) > rel_floor * peak]
        return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def _null_vector(rows: list, gap=1e-6) -> list:
    # unit-normalise each equation so the 4x4 Gram matrix is well scaled
    unit = []
    for r in rows:
        n = sqrt(fdot(r, r))
        unit.append([v / n for v in r])
    gram = matrix(_dyad_sum(unit))
    vals, vecs = eigsy(gram)
    order = sorted(range(4), key=lambda k: vals[k])
    if vals[order[1]] <= 0 or vals[order[0]] > big(gap) * vals[order[1]]:
        raise AmbiguousStateError(
            f"singular values {mp.nstr(sqrt(abs(vals[order[0]])), 4)} and "
            f"{mp.nstr(sqrt(abs(vals[order[1]])), 4)} do not isolate a null direction")
    k = order[0]
    u = [vecs[i, k] for i in range(4)]
    s = sum(u)
    return [v / s for v in u]


def reconstruct(b, E, grid, order: int = 100, terms: int = 40,
                basis: OrthoBasis | None = None) -> Reconstruction:
    """Sample the state at energy ``E`` on ``grid`` (unit L2 norm on the grid).

    The missing moments are the null vector of the algebraic 4x4 system at
    ``order``; the expansion keeps ``terms`` projection coefficients.  The
    sign is fixed so that the first antinode from the origin is positive.
    """
    if terms > order + 1:
        raise ValueError("terms cannot exceed order + 1")
    basis = basis or build_basis(b, order + 1)
    E = big(E)
    u = _null_vector(_am_matrix(basis, E, order))
    coeffs = [fdot(r, u) for r in lambda_rows(basis, E, range(terms))]
    bb = basis.b
    grid = [big(x) for x in grid]
    vals = []
    for x in grid:
        if x <= 0:
            vals.append(mpf(0))
            continue
        weight = exp(-(x - bb) ** 2 / 2) / sqrt(x)
        vals.append(x * x * basis.evaluate(coeffs, x) * weight)
    norm = sqrt(sum(_trapezoid_terms(grid, [v * v for v in vals])))
    vals = [v / norm for v in vals]
    peak = max(abs(v) for v in vals)
    for k in range(1, len(vals) - 1):
        if abs(vals[k]) >= abs(vals[k - 1]) and abs(vals[k]) >= abs(vals[k + 1]) \
                and abs(vals[k]) > 1e-3 * peak:
            if vals[k] < 0:
                vals = [-v for v in vals]
            break
    return Reconstruction(bb, E, tuple(grid), tuple(vals), tuple(coeffs), tuple(u))


def _trapezoid_terms(x: list, y: list):
    for k in range(len(x) - 1):
        yield (x[k + 1] - x[k]) * (y[k] + y[k + 1]) / 2


# ---------------------------------------------------------------------------
# Energy sweeps


def sweep_energies(bs, states: int, order: int = 100, step=0.01, tol=1e-15) -> dict:
    """Lowest ``states`` algebraic energies for every ``b`` in ``bs``.

    Levels fall monotonically from their ``b = 0`` values ``2(n+1)``, so the
    scan for each ``b`` runs over ``(0.4, 2 * states + 0.5)``.
    """
    out = {}
    for b in bs:
        b = big(b)
        roots = am_energies(b, order, (0.4, 2 * states + 0.5), step, tol)
        out[b] = roots[:states]
    return out
