import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf, gamma, sqrt, eigsy, matrix, exp, log10

from spiked_moments import oppq
from spiked_moments.oppq import (
    AmbiguousStateError,
    am_determinant,
    am_energies,
    bm_bounds,
    bm_eigenvalue,
    bm_minimum,
    build_basis,
    lambda_rows,
    orthonormality_residual,
    reconstruct,
    required_precision,
)

from oracles import fd_spectrum, interior_nodes

# Richardson-extrapolated finite-difference levels, frozen from tests/oracles.py
FD_LEVELS = {
    mpf("0.5"): ("1.42929265", "3.18401696", "4.98797122", "6.82044038"),
    mpf(1): ("1.03310328", "2.55726181", "4.16992315", "5.83701412"),
    mpf(5): ("0.51598078", "1.51822244", "2.52104675", "3.52469454"),
}


def b0_weight_moment(p):
    return 2 ** ((p + mpf(1) / 2) / 2 - 1) * gamma((p + mpf(1) / 2) / 2)


def test_first_two_polynomials_by_hand_at_b0():
    w = [b0_weight_moment(p) for p in range(3)]
    basis = build_basis(0, 2)
    assert abs(basis.xi[0][0] - 1 / sqrt(w[0])) < mpf(10) ** -90
    norm = sqrt(w[2] - w[1] ** 2 / w[0])
    assert abs(basis.xi[1][1] - 1 / norm) < mpf(10) ** -90
    assert abs(basis.xi[1][0] + w[1] / w[0] / norm) < mpf(10) ** -90


@pytest.mark.parametrize("b", [0, "0.5", 5])
def test_basis_is_orthonormal_at_default_precision(b):
    assert orthonormality_residual(build_basis(mpf(b), 41)) < mpf(10) ** -50


def test_basis_prefix_is_stable():
    small, large = build_basis(mpf("0.5"), 8), build_basis(mpf("0.5"), 12)
    assert all(abs(a - c) < mpf(10) ** -80
               for r, s in zip(small.xi, large.xi) for a, c in zip(r, s))


def test_precision_budget_grows_with_order_and_displacement():
    assert required_precision(100, 0) < required_precision(200, 0) < required_precision(200, 10)


def test_basis_size_validation():
    with pytest.raises(ValueError):
        build_basis(0, 0)
    with pytest.raises(ValueError):
        am_determinant(0, 2, 2)


def test_evaluate_matches_monomial_sum():
    basis = build_basis(mpf("0.5"), 5)
    c = [mpf(k + 1) / 3 for k in range(5)]
    x = mpf("1.3")
    direct = sum(c[n] * sum(basis.xi[n][j] * x ** j for j in range(n + 1)) for n in range(5))
    assert abs(basis.evaluate(c, x) - direct) < mpf(10) ** -80


def test_exact_levels_are_determinant_roots_at_b0():
    roots = am_energies(0, 20, (1.5, 20.5))
    for n in range(9):
        assert any(abs(r - 2 * (n + 1)) < mpf(10) ** -12 for r in roots)


@pytest.mark.parametrize("N,extra", [(5, ["4.254"]), (6, ["7.463"]), (7, ["5.708", "12.632"])])
def test_low_order_spurious_roots(N, extra):
    roots = am_energies(0, N, (0.4, 14.0), step=0.005)
    for e in extra:
        assert any(abs(r - mpf(e)) < mpf("1e-3") for r in roots)


def test_algebraic_levels_match_finite_difference_oracle():
    for b, levels in FD_LEVELS.items():
        with mp.workprec(required_precision(60, b)):
            roots = am_energies(b, 60, (0.4, 7.5))[:4]
        for r, e in zip(roots, levels):
            assert abs(r - mpf(e)) < mpf("2e-6")


def test_low_order_minima_at_half_displacement():
    b = mpf("0.5")
    for (E0, L0), window in [(("1.5150470", "-0.84559280"), (1.2, 1.8)),
                             (("4.3969969", "-1.1623635"), (4.0, 4.8))]:
        E, lam = bm_minimum(b, 10, window)
        # half a unit in the last printed digit, with some slack
        for got, text in ((E, E0), (log10(lam), L0)):
            assert abs(got - mpf(text)) < mpf("1.5") * mpf(10) ** -len(text.split(".")[1])


def test_eigenvalue_dual_route():
    b, E = mpf("0.5"), mpf("1.6")
    basis = build_basis(b, 11)
    rows = lambda_rows(basis, E, range(11))
    gram = matrix([[sum(r[a] * r[c] for r in rows) for c in range(4)] for a in range(4)])
    assert abs(bm_eigenvalue(b, 10, E, basis) / min(eigsy(gram)[0]) - 1) < mpf(10) ** -60


@settings(max_examples=10)
@given(st.floats(0.6, 8.0), st.integers(4, 10))
def test_eigenvalue_grows_with_order(E, N):
    basis = build_basis(mpf("0.5"), 12)
    a = bm_eigenvalue(mpf("0.5"), N, mpf(E), basis)
    c = bm_eigenvalue(mpf("0.5"), N + 1, mpf(E), basis)
    assert 0 <= a <= c * (1 + mpf(10) ** -60)


def test_bound_interval_contains_minimum_and_respects_bound():
    b = mpf("0.5")
    basis = build_basis(b, 11)
    iv = bm_bounds(b, 10, mpf(10) ** mpf("-0.79738"), (1.2, 1.8), basis=basis)
    assert iv.E_L < iv.E_min < iv.E_U
    assert abs(iv.E_L - mpf("1.355213912")) < mpf("1e-8")
    assert abs(iv.E_U - mpf("1.767314750")) < mpf("1e-8")
    eps = mpf(10) ** -10
    for inside in (iv.E_L + eps, iv.E_U - eps):
        assert bm_eigenvalue(b, 10, inside, basis) <= iv.bound
    for outside in (iv.E_L - eps, iv.E_U + eps):
        assert bm_eigenvalue(b, 10, outside, basis) > iv.bound


def test_bound_below_minimum_is_rejected():
    with pytest.raises(ValueError):
        bm_bounds(mpf("0.5"), 10, mpf(10) ** -3, (1.2, 1.8))


def test_reconstruction_reproduces_exact_b0_ground_state():
    grid = [mpf(k) / 20 for k in range(1, 121)]
    rec = reconstruct(0, 2, grid, order=40, terms=20)
    exact = [x ** mpf(1.5) * exp(-x * x / 2) for x in grid]
    norm = sqrt(sum((grid[k + 1] - grid[k]) * (exact[k] ** 2 + exact[k + 1] ** 2) / 2
                    for k in range(len(grid) - 1)))
    assert max(abs(v - e / norm) for v, e in zip(rec.values, exact)) < mpf(10) ** -60


def test_reconstruction_node_count_matches_finite_difference():
    b = mpf(5)
    _, chi, vecs = fd_spectrum(5.0, 4)
    grid = [mpf(k) / 10 for k in range(1, 161)]
    with mp.workprec(required_precision(100, b)):
        basis = build_basis(b, 101)
        for n, E in enumerate(FD_LEVELS[b]):
            level = am_energies(b, 100, (mpf(E) - mpf("0.01"), mpf(E) + mpf("0.01")), basis=basis)[0]
            rec = reconstruct(b, level, grid, basis=basis)
            assert rec.sign_changes() == n == interior_nodes(vecs[:, n])


def test_null_vector_rejects_full_rank_system():
    # a full-rank system has no null direction to pick
    with pytest.raises(AmbiguousStateError):
        oppq._null_vector([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
