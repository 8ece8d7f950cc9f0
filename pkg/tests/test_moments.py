"""Derivative kernel unit tests against the brute-force series oracle."""

import math

import numpy as np
import pytest

from heraldkit.moments import (DEFAULT_ORDER_CAP, DerivOrder,
                               DerivativeTooLargeError, GaussianForm,
                               expanded_term_count, gaussian_derivative,
                               loop_hafnian, multiset_loop_hafnian,
                               taylor_oracle)


def random_form(rng, K):
    A = 0.4 * (rng.standard_normal((2 * K, 2 * K))
               + 1j * rng.standard_normal((2 * K, 2 * K)))
    M = (A + A.T) / 2
    v = 0.5 * (rng.standard_normal(2 * K) + 1j * rng.standard_normal(2 * K))
    return GaussianForm(M, v)


def test_zero_order_is_one():
    form = random_form(np.random.default_rng(0), 2)
    assert gaussian_derivative(form, DerivOrder((0, 0))) == 1.0


def test_first_order_single_pair():
    # d^2/dx dy exp(m xy + vy y + vx x) at 0 is m + vx vy
    m, vx, vy = 0.3 - 0.1j, 0.2j, 0.7
    M = np.array([[0, m], [m, 0]], dtype=complex)
    form = GaussianForm(M, np.array([vy, vx]))
    val = gaussian_derivative(form, DerivOrder((1,)))
    assert abs(val - (m + vx * vy)) < 1e-14


def test_against_oracle_sweep():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(60):
        K = int(rng.integers(1, 4))
        form = random_form(rng, K)
        orders = tuple(int(o) for o in rng.integers(0, 3, K))
        total = sum(orders)
        px = int(rng.integers(0, min(total, max(0, 12 - 2 * total)) + 1))
        py = int(rng.integers(0, min(total, max(0, 12 - 2 * total - px)) + 1))
        order = DerivOrder(orders, power_x=px, power_y=py)
        a = gaussian_derivative(form, order)
        b = taylor_oracle(form, order)
        worst = max(worst, abs(a - b) / max(abs(a), abs(b), 1e-30))
    assert worst < 1e-10


def test_monomial_weights():
    rng = np.random.default_rng(11)
    form = random_form(rng, 2)
    wx = tuple(rng.standard_normal(2) + 1j * rng.standard_normal(2))
    wy = tuple(rng.standard_normal(2) + 1j * rng.standard_normal(2))
    order = DerivOrder((2, 1), power_x=2, power_y=1, weights_x=wx, weights_y=wy)
    a = gaussian_derivative(form, order)
    b = taylor_oracle(form, order)
    assert abs(a - b) / abs(b) < 1e-12


def test_order_cap():
    form = random_form(np.random.default_rng(1), 1)
    with pytest.raises(DerivativeTooLargeError):
        gaussian_derivative(form, DerivOrder((DEFAULT_ORDER_CAP,)))


def test_power_exceeding_order_rejected():
    with pytest.raises(ValueError):
        DerivOrder((1,), power_x=2)


def test_loop_hafnian_small_cases():
    # 2x2: haf = m12 + d1 d2
    m = np.array([[0.5, 0.3], [0.3, -0.2]], dtype=complex)
    assert abs(loop_hafnian(m) - (0.3 + 0.5 * -0.2)) < 1e-14
    # empty
    assert loop_hafnian(np.zeros((0, 0))) == 1.0


def test_loop_hafnian_vs_multiset_expansion():
    rng = np.random.default_rng(3)
    A = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    M = (A + A.T) / 2
    # index 0 duplicated twice equals the expanded 4x4 loop hafnian
    idx = [0, 0, 1, 2]
    big = M[np.ix_(idx, idx)]
    a = multiset_loop_hafnian(M, np.diag(M), (2, 1, 1))
    b = loop_hafnian(big)
    assert abs(a - b) < 1e-12


def test_multiset_memo_reuse():
    rng = np.random.default_rng(5)
    A = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    M = (A + A.T) / 2
    d = np.diag(M)
    memo = {}
    a = multiset_loop_hafnian(M, d, (2, 1, 0), memo=memo)
    b = multiset_loop_hafnian(M, d, (2, 1, 0))
    assert a == b
    c = multiset_loop_hafnian(M, d, (2, 1, 1), memo=memo)
    assert abs(c - multiset_loop_hafnian(M, d, (2, 1, 1))) == 0


def test_expanded_term_count_telephone_numbers():
    # involution counts: 1, 1, 2, 4, 10, 26
    assert expanded_term_count(DerivOrder((1,))) == 2
    assert expanded_term_count(DerivOrder((2,))) == 10
    assert expanded_term_count(DerivOrder((1, 1), power_x=1, power_y=1)) == 76


def test_symmetry_check():
    with pytest.raises(ValueError):
        loop_hafnian(np.array([[0.0, 1.0], [0.5, 0.0]]))
