from decimal import Decimal, getcontext

import pytest
from hypothesis import given, settings, strategies as st

from mhcount import bounds

getcontext().prec = 50


def D(x):
    return Decimal(x)


def real_main(q, n, m, k, N):
    return abs(D(N) - D(q) ** (n - 1)) <= 9 * D(m * k) ** max(n - 1, 4) * D(q) ** (n - 2) * D(q).sqrt()


def real_diagonal(q, n, m, i, N_i):
    t = n - i
    rhs = D(m - 1) ** t * D(q).sqrt() ** (t - 2) * (1 + D(q).sqrt())
    return abs(D(N_i) - D(q) ** (t - 1)) <= rhs


def real_pcl(q, n, d, c):
    err = abs(D(c) - bounds.p_count(q, n - 1))
    return err <= (d - 1) * (d - 2) * D(q) ** (n - 2) * D(q).sqrt() + 14 * (d - 1) ** 2 * d**2 * D(q) ** (n - 2)


def test_main_rhs_example():
    v = bounds.verdict_main(5, 3, 3, 2, 26)
    assert v.rhs_sq == 17006112000
    assert v.lhs_sq == 1 and v.passed


def test_main_exponent_selector():
    # max(n-1, 4): 4 up to n = 5, then n - 1
    assert [bounds.verdict_main(5, n, 2, 2, 0).rhs_sq // (81 * 5 ** (2 * n - 3)) for n in (3, 5, 6, 7)] \
        == [4**8, 4**8, 4**10, 4**12]


def test_nstar_main_terms():
    assert bounds.nstar_main_term(5, 3) == 13
    assert bounds.nstar_main_term(7, 4) == 185
    for q in range(2, 60):
        for n in range(1, 9):
            assert q * bounds.nstar_main_term(q, n) == (q - 1) ** n - (-1) ** n


def test_existence_thresholds():
    assert bounds.existence_threshold(3, 3, 2).threshold == 167961600
    assert bounds.existence_threshold(5, 2, 3).threshold == 484 * 12**8
    assert bounds.existence_threshold(4, 2, 3).threshold == 100 * 6**8
    with pytest.raises(ValueError):
        bounds.existence_threshold(2, 3, 2)


def test_existence_verdict_encoding():
    assert bounds.verdict_existence(5, 3, 3, 2, 14).passed
    assert bounds.verdict_existence(5, 3, 3, 2, 0).passed
    t = bounds.existence_threshold(3, 3, 2).threshold
    assert not bounds.verdict_existence(t + 1, 3, 3, 2, 0).passed
    assert bounds.verdict_existence(t, 3, 3, 2, 0).passed


def test_existence_chain_literal():
    # right side is negative at desk scale, so any N* >= 0 passes
    v = bounds.verdict_existence_chain(7, 5, 2, 3, 0)
    assert v.passed
    with pytest.raises(ValueError):
        bounds.verdict_existence_chain(7, 4, 2, 3, 0)


cases = st.tuples(st.integers(2, 2000), st.integers(3, 7), st.integers(2, 6), st.integers(2, 4))


@settings(max_examples=300, deadline=None)
@given(cases, st.integers(-10**12, 10**12))
def test_main_matches_decimal(params, delta):
    q, n, m, k = params
    N = max(q ** (n - 1) + delta, 0)
    assert bounds.verdict_main(q, n, m, k, N).passed == real_main(q, n, m, k, N)


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 5000), st.integers(3, 8), st.integers(2, 8), st.data())
def test_diagonal_matches_decimal(q, n, m, data):
    i = data.draw(st.integers(1, n - 1))
    centre = q ** (n - i - 1)
    N_i = data.draw(st.integers(0, 2 * centre + 3 * (m - 1) ** (n - i) * q ** ((n - i) // 2 + 1)))
    assert bounds.verdict_diagonal(q, n, m, i, N_i).passed == real_diagonal(q, n, m, i, N_i)


@settings(max_examples=300, deadline=None)
@given(cases, st.integers(-10**15, 10**15))
def test_pcl_matches_decimal(params, delta):
    q, n, m, k = params
    c = max(bounds.p_count(q, n - 1) + delta, 0)
    assert bounds.verdict_pcl(q, n, m, k, c).passed == real_pcl(q, n, m * k, c)


def test_boundary_cases_exact():
    # q = 4 makes sqrt(q) rational; hit equality exactly
    q, n, m, i = 4, 4, 3, 2
    rhs = (m - 1) ** 2 * 1 * (1 + 2)  # (m-1)^t q^0 (1 + 2) with t = 2
    assert bounds.verdict_diagonal(q, n, m, i, q + rhs).passed
    assert not bounds.verdict_diagonal(q, n, m, i, q + rhs + 1).passed
    # t = 1: (m-1) q^(-1/2) (1 + q^(1/2)) = 2 * 3 / 2 = 3
    assert bounds.verdict_diagonal(4, 3, 3, 2, 4).passed
    assert not bounds.verdict_diagonal(4, 3, 3, 2, 5).passed


@settings(max_examples=100, deadline=None)
@given(cases, st.integers(0, 10**6))
def test_main_monotone_in_error(params, e):
    q, n, m, k = params
    base = q ** (n - 1)
    if bounds.verdict_main(q, n, m, k, base + e + 1).passed:
        assert bounds.verdict_main(q, n, m, k, base + e).passed


def test_nstar_flags_non_bijective_power():
    assert bounds.verdict_nstar(7, 3, 3, 2, 0).hypothesis_violation
    assert not bounds.verdict_nstar(5, 3, 3, 2, 14).hypothesis_violation


def test_infinity_aux():
    v = bounds.verdict_infinity(5, 3, 3, 2, 6)
    assert v.passed and v.aux["sharper_degree_m"]
    assert v.rhs_sq == 5**4 * 5


def test_tightness_format():
    assert bounds.format_ratio(1, 81000) == "1.23457E-5"
    assert bounds.format_ratio(0, 7) == "0.00000E+0"
    assert bounds.verdict_main(5, 3, 3, 2, 26).tightness == "7.66827E-6"


@pytest.mark.parametrize("q", [2, 3, 10, 997, 10**6])
def test_identity_small_n(q):
    for n in range(1, 12):
        assert bounds.identity_truncated_sum(q, n)


def test_zero_level_sum_bijective():
    assert bounds.zero_level_sum_bijective(5, 3) == 12
    assert bounds.zero_level_sum_bijective(5, 4) == 4 * 25 - 6 * 5 + 4


@pytest.mark.parametrize("n,d,expected", [(2, 3, (2, 4)), (3, 6, (105, 125)), (1, 2, (1, 1))])
def test_betti_upper(n, d, expected):
    assert bounds.betti_upper(n, d) == expected
    inter, coarse = bounds.betti_upper(n, d)
    assert inter <= coarse


def test_p_count():
    assert [bounds.p_count(3, r) for r in range(-1, 4)] == [0, 1, 4, 13, 40]


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 500), st.integers(3, 8), st.integers(2, 6), st.integers(2, 4))
def test_main_rhs_monotone(q, n, m, k):
    rhs = bounds.verdict_main(q, n, m, k, 0).rhs_sq
    for args in ((q + 1, n, m, k), (q, n + 1, m, k), (q, n, m + 1, k), (q, n, m, k + 1)):
        assert bounds.verdict_main(*args, 0).rhs_sq >= rhs


def test_single_variable_diagonal_q7():
    # x^2 = c over F_7 has 0, 1 or 2 roots; |N - 1| <= 1 is exactly what the bound allows
    for roots in (0, 1, 2):
        assert bounds.verdict_diagonal(7, 3, 2, 2, roots).passed
    assert not bounds.verdict_diagonal(7, 3, 2, 2, 3).passed


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 3000), st.integers(3, 8), st.integers(2, 8), st.data())
def test_simplified_diagonal_implied(q, n, m, data):
    i = data.draw(st.integers(1, n - 1))
    N_i = data.draw(st.integers(0, 4 * q ** (n - i)))
    v = bounds.verdict_diagonal(max(q, 2), n, m, i, N_i)
    if v.passed:
        assert v.aux["simplified"]
