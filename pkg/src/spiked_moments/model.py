"""The shifted spiked oscillator and its moment-equation representations.

In the shifted coordinate ``chi = x + b >= 0`` the problem reads

    -Psi'' + (3/4 chi^-2 + (chi - b)^2) Psi = 2 E Psi,   Psi(0) = 0.

Each representation turns the equation into a linear recursion on power
moments of some non-negative (for the states it targets) configuration.
Every moment is then a fixed linear combination of ``m_s + 1`` *missing*
moments, recorded in a :class:`GeneratorTable`.

Representations
---------------
PSI
    moments ``u(p) = int chi^(p-2) Psi``, ``m_s = 3``.  At ``b = 0`` the
    even and odd moments decouple; ``sigma in {0, 1}`` selects one chain
    ``h(q) = u(2q + sigma)`` with ``m_s = 1``.
PHI
    moments of ``Phi = exp(-(chi-b)^2/2) Psi`` shifted by ``sigma/2``.
    ``sigma = 0`` has ``m_s = 1``; ``sigma = 3`` works on
    ``tau(n) = int chi^(n+1/2) Phi`` and has ``m_s = 0``.
PSI2
    moments ``u(p) = int chi^(p-3) Psi^2`` of the probability density,
    ``m_s = 3``; non-negative for every bound state.
WEIGHT
    moments ``omega(p)`` of ``R = chi^-1/2 exp(-(chi-b)^2/2)``, ``m_s = 1``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

from mpmath import mp, mpf, quad, exp, sqrt, log

from .numerics import big

__all__ = [
    "Representation",
    "Problem",
    "GeneratorTable",
    "WeightMoments",
    "DegenerateEnergyError",
    "QuadraturePrecisionError",
    "build_generator",
    "moments_from_missing",
    "weight_moments",
    "exact_b0_energy",
    "potential",
]

THREE_QUARTERS = mpf(3) / 4


class Representation(str, enum.Enum):
    PSI = "psi"
    PHI = "phi"
    PSI2 = "psi2"
    WEIGHT = "weight"


class DegenerateEnergyError(ArithmeticError):
    """A forward recursion step has a vanishing leading coefficient.

    Raised by the PHI representation at ``E = n + sigma/2 + 1/2`` when the
    right-hand side does not vanish identically.
    """

    def __init__(self, E, step: int):
        self.E = E
        self.step = step
        super().__init__(f"zero leading coefficient at recursion step {step} (E = {mp.nstr(E, 15)})")


class QuadraturePrecisionError(ArithmeticError):
    """Weight-moment quadrature missed its error target."""


@dataclass(frozen=True)
class Problem:
    """One oscillator (fixed ``b``) viewed through one representation."""

    b: mpf
    representation: Representation = Representation.PSI
    sigma: int | None = None

    def __post_init__(self):
        b = big(self.b)
        object.__setattr__(self, "b", b)
        rep = Representation(self.representation)
        object.__setattr__(self, "representation", rep)
        if b < 0:
            raise ValueError("barrier displacement b must be >= 0")
        if rep is Representation.PHI and self.sigma not in (0, 3):
            raise ValueError("PHI representation needs sigma in {0, 3}")
        if rep is Representation.PSI and self.sigma is not None:
            if self.sigma not in (0, 1):
                raise ValueError("PSI chains are sigma = 0 (even) or 1 (odd)")
            if b != 0:
                raise ValueError("PSI even/odd chains decouple only at b = 0")
        if rep in (Representation.PSI2, Representation.WEIGHT) and self.sigma is not None:
            raise ValueError(f"{rep.value} takes no sigma")

    @property
    def beta(self) -> mpf:
        return -2 * self.b

    def lam(self, E) -> mpf:
        """Spectral parameter ``2E - b^2`` of the PSI recursion."""
        return 2 * big(E) - self.b ** 2

    @property
    def missing_order(self) -> int:
        rep = self.representation
        if rep is Representation.PSI:
            return 3 if self.sigma is None else 1
        if rep is Representation.PHI:
            return 1 if self.sigma == 0 else 0
        if rep is Representation.PSI2:
            return 3
        return 1

    @property
    def label(self) -> str:
        rep = self.representation.value
        return rep if self.sigma is None else f"{rep}-s{self.sigma}"


@dataclass(frozen=True)
class GeneratorTable:
    """``moment(p) = sum_l M[p][l] * u_l`` for ``0 <= p <= p_max``.

    ``free`` lists the moment indices acting as missing moments.  Normally
    it is ``0 .. m_s``; a degenerate PHI step adds the index whose value the
    recursion leaves undetermined.
    """

    problem: Problem
    E: mpf
    M: tuple
    free: tuple

    @property
    def m_s(self) -> int:
        return len(self.free) - 1

    @property
    def p_max(self) -> int:
        return len(self.M) - 1

    def row(self, p: int) -> tuple:
        return self.M[p]


def _unit_rows(n: int) -> list:
    return [[mpf(int(i == j)) for j in range(n)] for i in range(n)]


def _psi_rows(problem: Problem, E: mpf, p_max: int) -> tuple[list, tuple]:
    lam = problem.lam(E)
    if problem.sigma is None:
        beta = problem.beta
        rows = _unit_rows(4)
        for p in range(p_max - 3):
            c = p * (p - 1) - THREE_QUARTERS
            rows.append([-beta * rows[p + 3][l] + lam * rows[p + 2][l] + c * rows[p][l]
                         for l in range(4)])
        return rows, (0, 1, 2, 3)
    # b = 0 chain h(q) = u(2q + sigma)
    s = problem.sigma
    rows = _unit_rows(2)
    for q in range(p_max - 1):
        c = (2 * q + s) * (2 * q + s - 1) - THREE_QUARTERS
        rows.append([lam * rows[q + 1][l] + c * rows[q][l] for l in range(2)])
    return rows, (0, 1)


def _psi2_rows(problem: Problem, E: mpf, p_max: int) -> tuple[list, tuple]:
    b = problem.b
    rows = _unit_rows(4)
    k2 = 8 * E - 4 * b * b
    for p in range(p_max - 3):
        c3 = 4 * b * (1 + 2 * p)
        c2 = k2 * p
        c0 = (p - 1) * (p * (p - 2) - 3)
        lead = 4 * (1 + p)
        rows.append([(c3 * rows[p + 3][l] + c2 * rows[p + 2][l] + c0 * rows[p][l]) / lead
                     for l in range(4)])
    return rows, (0, 1, 2, 3)


def _weight_rows(problem: Problem, p_max: int) -> tuple[list, tuple]:
    b = problem.b
    rows = _unit_rows(2)
    for p in range(p_max - 1):
        rows.append([(p + mpf(1) / 2) * rows[p][l] + b * rows[p + 1][l] for l in range(2)])
    return rows, (0, 1)


def _phi_rows(problem: Problem, E: mpf, p_max: int) -> tuple[list, tuple]:
    b = problem.b
    if problem.sigma == 0:
        # (2E - 1 - 2n) u(n+2) = -(n + 1/2)(n - 3/2) u(n) - 2 b n u(n+1)
        rows, free = _unit_rows(2), [0, 1]
        for n in range(p_max - 1):
            lead = 2 * E - 1 - 2 * n
            rhs = [-(n + mpf(1) / 2) * (n - mpf(3) / 2) * x - 2 * b * n * y
                   for x, y in zip(rows[n], rows[n + 1])]
            rows.append(_solve_step(rows, free, lead, rhs, E, n))
        return rows, tuple(free)
    # sigma = 3: (2E - 4 - 2n) tau(n+1) = -n(n+2) tau(n-1) - 2b(n + 3/2) tau(n)
    rows, free = _unit_rows(1), [0]
    for n in range(p_max):
        lead = 2 * E - 4 - 2 * n
        prev = rows[n - 1] if n >= 1 else [mpf(0)] * len(free)
        rhs = [-n * (n + 2) * x - 2 * b * (n + mpf(3) / 2) * y
               for x, y in zip(prev, rows[n])]
        rows.append(_solve_step(rows, free, lead, rhs, E, n))
    return rows, tuple(free)


def _solve_step(rows: list, free: list, lead, rhs: list, E, n: int) -> list:
    if lead != 0:
        return [v / lead for v in rhs]
    if any(v != 0 for v in rhs):
        raise DegenerateEnergyError(E, n)
    # 0 * x = 0: the new moment is undetermined and becomes a missing moment
    free.append(len(rows))
    for r in rows:
        r.append(mpf(0))
    return [mpf(0)] * (len(free) - 1) + [mpf(1)]


def build_generator(problem: Problem, E, p_max: int) -> GeneratorTable:
    """Closed-form coefficients ``M_E(p, l)`` for ``0 <= p <= p_max``."""
    E = big(E)
    m_s = problem.missing_order
    if p_max < m_s + 1:
        raise ValueError(f"p_max must be at least m_s + 1 = {m_s + 1}")
    rep = problem.representation
    if rep is Representation.PSI:
        rows, free = _psi_rows(problem, E, p_max)
    elif rep is Representation.PHI:
        rows, free = _phi_rows(problem, E, p_max)
    elif rep is Representation.PSI2:
        rows, free = _psi2_rows(problem, E, p_max)
    else:
        rows, free = _weight_rows(problem, p_max)
    return GeneratorTable(problem, E, tuple(tuple(r) for r in rows[: p_max + 1]), tuple(free))


def moments_from_missing(table: GeneratorTable, u) -> list:
    """Moment sequence ``sum_l M(p, l) u_l`` for every row of ``table``."""
    u = [big(x) for x in u]
    if len(u) != table.m_s + 1:
        raise ValueError(f"expected {table.m_s + 1} missing moments, got {len(u)}")
    return [mp.fdot(row, u) for row in table.M]


# ---------------------------------------------------------------------------
# Weight moments


@dataclass(frozen=True)
class WeightMoments:
    b: mpf
    omega: tuple

    @property
    def p_max(self) -> int:
        return len(self.omega) - 1

    def __getitem__(self, p: int) -> mpf:
        return self.omega[p]


@lru_cache(maxsize=64)
def _seed_moments(b: mpf, prec: int) -> tuple[mpf, mpf]:
    # chi = t^2 removes the chi^-1/2 endpoint singularity:
    # omega(p) = int_0^inf 2 t^(2p) exp(-(t^2 - b)^2 / 2) dt
    with mp.workprec(prec + 20):
        cutoff = max(mpf(40), sqrt(2 * (prec + 40) * log(2)) + 5)
        knots = {mpf(0), sqrt(b + cutoff)}
        for off in (-12, -4, 0, 4, 12):
            if b + off > 0:
                knots.add(sqrt(b + off))
        knots = sorted(knots)
        out = []
        for p in (0, 1):
            val, err = quad(lambda t: 2 * t ** (2 * p) * exp(-(t * t - b) ** 2 / 2), knots,
                            method="gauss-legendre", error=True)
            if err > mp.ldexp(abs(val), -prec + 4):
                raise QuadraturePrecisionError(
                    f"omega({p}) quadrature error {mp.nstr(err, 3)} misses {prec}-bit target")
            out.append(val)
    return +out[0], +out[1]


def weight_moments(b, p_max: int) -> WeightMoments:
    """``omega(p) = int_0^inf chi^(p - 1/2) exp(-(chi - b)^2 / 2) dchi``.

    ``omega(0)`` and ``omega(1)`` come from quadrature; the rest from the
    forward recursion ``omega(p+2) = (p + 1/2) omega(p) + b omega(p+1)``,
    which only adds positive terms.
    """
    b = big(b)
    if b < 0:
        raise ValueError("b must be >= 0")
    w0, w1 = _seed_moments(b, mp.prec)
    omega = [w0, w1]
    for p in range(p_max - 1):
        omega.append((p + mpf(1) / 2) * omega[p] + b * omega[p + 1])
    return WeightMoments(b, tuple(omega[: p_max + 1]))


def exact_b0_energy(n: int) -> mpf:
    """Energy of the ``n``-th level when the wall sits at the origin."""
    if n < 0:
        raise ValueError("level index must be >= 0")
    return mpf(2 * (n + 1))


def potential(chi, b) -> mpf:
    """``V_b(chi) = (3/4 chi^-2 + (chi - b)^2) / 2`` in energy units."""
    chi, b = big(chi), big(b)
    return (THREE_QUARTERS / chi ** 2 + (chi - b) ** 2) / 2
