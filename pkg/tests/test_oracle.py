import itertools

import numpy as np
import pytest

from kothe.certificates import FAILS, HOLDS, SearchBudget
from kothe.criteria.bounded_pairs import check_b_matrix_pair
from kothe.operators import MatrixOperator, opnorm_bounds, opnorm_l1_domain
from kothe.oracle import SignPattern, brute_force_condition, brute_opnorm, nondecreasing_maps
from kothe.spaces import INFINITE_TYPE, L1, L2, LINF, KotheMatrix, KotheSpace

TINY = SearchBudget(n_range=6)


def space(grid, ell=L1):
    return KotheSpace(KotheMatrix.from_grid(grid), ell)


def test_sign_patterns():
    pats = list(SignPattern.all(3))
    assert len(pats) == 4 and all(p.signs[0] == 1 for p in pats)
    with pytest.raises(ValueError):
        SignPattern((1, 0))


def test_nondecreasing_maps():
    maps = nondecreasing_maps(3)
    assert len(maps) == 10  # multisets of size 3 from 3 levels
    assert all(all(a <= b for a, b in zip(m, m[1:])) for m in maps)
    assert all(m[0] <= 1 for m in nondecreasing_maps(3, 1))


def test_zero_operator():
    assert brute_opnorm(MatrixOperator(np.zeros((3, 3))), space([[1.0]] * 3), space([[1.0]] * 3), 1, 1).value == 0.0


def test_linf_identity():
    res = brute_opnorm(MatrixOperator.identity(3), space([[1.0]] * 3, LINF), space([[1.0]] * 3, LINF), 1, 1)
    assert res.exact and res.value == 1.0


def test_l1_matches_column_formula():
    rng = np.random.default_rng(7)
    for _ in range(20):
        grid = np.sort(rng.uniform(0.1, 5.0, (4, 3)), axis=1)
        T = MatrixOperator(rng.standard_normal((4, 4)))
        dom, cod = space(grid), space(np.sort(rng.uniform(0.1, 5.0, (4, 3)), axis=1), L2)
        assert brute_opnorm(T, dom, cod, 2, 3).value == pytest.approx(opnorm_l1_domain(T, dom, cod, 2, 3), rel=1e-12)


def test_lp_is_lower_bound():
    rng = np.random.default_rng(8)
    T = MatrixOperator(rng.standard_normal((4, 4)))
    dom = space([[1.0], [2.0], [3.0], [4.0]], L2)
    res = brute_opnorm(T, dom, dom, 1, 1)
    bounds = opnorm_bounds(T, dom, dom, 1, 1)
    assert not res.exact
    assert res.value <= bounds.upper * (1 + 1e-12)


def test_exact_refused_for_lp():
    with pytest.raises(ValueError):
        brute_opnorm(MatrixOperator.identity(2), space([[1.0]] * 2, L2), space([[1.0]] * 2), 1, 1, exact=True)


def test_budget_cap():
    A = KotheMatrix.power_series(INFINITE_TYPE, n_max=10, k_max=3)
    with pytest.raises(ValueError):
        brute_force_condition(A, A, SearchBudget(n_range=9))


def test_known_outcomes():
    A = KotheMatrix.power_series(INFINITE_TYPE, n_max=6, k_max=3)
    B = KotheMatrix.constant_in_k(np.arange(1.0, 7.0), 3)
    assert brute_force_condition(A, A, TINY).status == FAILS
    assert brute_force_condition(A, B, TINY).status == HOLDS
    one = KotheMatrix.from_grid([[1.0, 2.0, 3.0]])
    assert brute_force_condition(one, one, TINY).status == HOLDS


def test_agrees_with_checker_on_all_maps():
    A = KotheMatrix.power_series(INFINITE_TYPE, n_max=6, k_max=3)
    B = KotheMatrix.constant_in_k(np.arange(1.0, 7.0), 3)
    budget = TINY.with_maps(*nondecreasing_maps(3, TINY.n_max_answer(3)))
    for X, Y in itertools.product((A, B), repeat=2):
        assert check_b_matrix_pair(X, Y, budget=budget).status == brute_force_condition(X, Y, budget).status
