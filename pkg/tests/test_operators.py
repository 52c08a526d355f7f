from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from adec.errors import InvalidBlock
from adec.operators import (
    DecimationPlan,
    a_seq,
    a_seq_closed,
    adapted_scaled,
    alternative_scaled,
    apply_dbar,
    apply_delta_inv,
    apply_s_scaled,
    apply_sub_sample,
    dbar_rho,
    delta,
    delta_inv,
    delta_inv_pow,
    delta_pow,
    int_matmul,
    s_rho,
    s_rho_scaled,
    sub_sample,
)


def test_delta_small():
    assert delta(3).tolist() == [[1, 0, 0], [-1, 1, 0], [0, -1, 1]]
    assert (delta_inv(3) @ np.ones(3, dtype=int)).tolist() == [1, 2, 3]


def test_delta_pow_binomial_row():
    assert delta_pow(4, 2)[2].tolist() == [1, -2, 1, 0]
    row = delta_pow(8, 3)[7]
    assert row[4:].tolist() == [(-1) ** l * comb(3, l) for l in (3, 2, 1, 0)]


def test_delta_inv_pow_inverts():
    for r in range(4):
        assert np.array_equal(delta_inv_pow(7, r) @ delta_pow(7, r), np.eye(7, dtype=int))


def test_dbar_example():
    assert dbar_rho(4, 2).tolist() == [[1, 0, -1, 0], [0, 1, 0, 0], [-1, 0, 1, 0], [0, -1, 0, 1]]


@pytest.mark.parametrize("m", [1, 3, 5, 8])
def test_dbar_full_block(m):
    D = dbar_rho(m, m)
    assert not D[:-1].any()
    assert D[-1].tolist() == [0] * (m - 1) + [1]


def test_twist_small_case():
    left = sub_sample(4, 2) @ dbar_rho(4, 2)
    assert left.tolist() == [[0, 1, 0, 0], [0, -1, 0, 1]]
    assert np.array_equal(left, delta(2) @ sub_sample(4, 2))


def test_sub_sample():
    assert sub_sample(4, 2).tolist() == [[0, 1, 0, 0], [0, 0, 0, 1]]
    assert np.array_equal(sub_sample(3, 1), np.eye(3, dtype=int))
    assert np.nonzero(sub_sample(6, 3))[1].tolist() == [2, 5]


def test_s_rho_examples():
    assert all(v == (1 if i == j else 0) for (i, j), v in np.ndenumerate(s_rho(5, 1)))
    assert list(s_rho(4, 2)[2]) == [0, Fraction(1, 2), Fraction(1, 2), 0]


@pytest.mark.parametrize("m", range(1, 25))
def test_s_rho_identity_exact(m):
    for rho in (d for d in range(1, m + 1) if m % d == 0):
        lhs = s_rho(m, rho) * rho
        rhs = dbar_rho(m, rho) @ delta_inv(m)
        assert all(lhs[i, j] == rhs[i, j] for i in range(m) for j in range(m))
        assert np.array_equal(s_rho_scaled(m, rho), rhs)


def test_a_seq():
    assert a_seq(0, 5) == 1 and a_seq(0, 0) == 0
    assert [a_seq(1, s) for s in range(1, 9)] == list(range(1, 9))
    for j in range(4):
        for m in range(1, 13):
            col = delta_inv_pow(m, j) @ np.ones(m, dtype=int)
            assert col.tolist() == [a_seq(j, l) for l in range(1, m + 1)]


@given(l=st.integers(0, 6), s=st.integers(1, 30))
def test_a_seq_closed_form(l, s):
    assert a_seq(l, s) == a_seq_closed(l, s) == comb(s + l - 1, l)


@settings(max_examples=30, deadline=None)
@given(eta=st.integers(1, 8), rho=st.integers(1, 6), times=st.integers(0, 3), seed=st.integers(0, 999))
def test_structured_appliers_match_dense(eta, rho, times, seed):
    m = eta * rho
    X = np.random.default_rng(seed).integers(-9, 10, (m, 2))
    Dinv = np.linalg.matrix_power(delta_inv(m), times)
    Db = np.linalg.matrix_power(dbar_rho(m, rho), times)
    Sr = np.linalg.matrix_power(s_rho_scaled(m, rho), times)
    assert np.array_equal(apply_delta_inv(X, times), Dinv @ X)
    assert np.array_equal(apply_dbar(X, rho, times), Db @ X)
    assert np.array_equal(apply_s_scaled(X, rho, times), Sr @ X)
    assert np.array_equal(apply_sub_sample(X, rho), sub_sample(m, rho) @ X)


@pytest.mark.parametrize("r,eta,rho", [(1, 3, 2), (2, 6, 4), (3, 9, 2), (2, 4, 3)])
def test_scaled_operators_match_dense(r, eta, rho):
    plan = DecimationPlan.from_eta(r, eta, rho)
    m = plan.m
    dense = sub_sample(m, rho) @ np.linalg.matrix_power(dbar_rho(m, rho), r) @ delta_inv_pow(m, r)
    assert np.array_equal(adapted_scaled(plan), dense)
    if r <= 2:
        alt = sub_sample(m, rho) @ np.linalg.matrix_power(s_rho_scaled(m, rho), r)
        assert np.array_equal(alternative_scaled(plan), alt)


def test_plan_validation():
    plan = DecimationPlan(2, 24, 4)
    assert plan.eta == 6 and DecimationPlan.from_eta(2, 6, 4) == plan
    with pytest.raises(InvalidBlock):
        DecimationPlan(1, 10, 4)
    with pytest.raises(InvalidBlock):
        DecimationPlan(1, 10, 0)


def test_large_order_widens_to_exact_integers():
    plan = DecimationPlan.from_eta(6, 36, 32)
    S = adapted_scaled(plan)
    assert S.dtype == object or np.abs(S).max() < 2**62
    q = np.ones((plan.m, 1), dtype=np.int64)
    out = int_matmul(S, q)
    assert all(isinstance(int(v), int) for v in out[:, 0])
