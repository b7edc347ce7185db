from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from torusrot.errors import CertificationError
from torusrot.numeric import (alpha, admissible_indices, build_param, ceil_mul, convergents,
                              golden, is_admissible, rho_vec, silver)

from conftest import golden_oracle, silver_oracle


def test_golden_convergent(gold):
    assert (gold.convergent_num, gold.convergent_den) == (6765, 10946)
    assert abs(gold.rho - Fraction("0.6180339887")) < gold.error_bound + Fraction(1, 10 ** 10)
    assert gold.max_safe_index == 10945


def test_silver_convergent():
    # 5741/13860 is the 11th convergent of [0; 2, 2, ...]
    p = silver(11)
    assert (p.convergent_num, p.convergent_den) == (5741, 13860)
    assert convergents([2] * 12)[10] == (5741, 13860)


def test_convergents_match_direct_evaluation():
    coeffs = [1, 2, 3, 4, 5, 6]
    for k, (p, q) in enumerate(convergents(coeffs), start=1):
        x = Fraction(0)
        for a in reversed(coeffs[:k]):
            x = 1 / (a + x)
        assert x == Fraction(p, q)


def test_unit_convergent_rejected():
    with pytest.raises(ValueError):
        build_param([1], 1)


def test_depth_out_of_range():
    with pytest.raises(ValueError):
        build_param([1, 1, 1], 5)


def test_error_bound_brackets_true_value(gold, silv):
    with mpmath.workdps(50):
        for param, true in ((gold, golden_oracle()), (silv, silver_oracle())):
            d = abs(mpmath.mpf(param.convergent_num) / param.convergent_den - true)
            assert d <= mpmath.mpf(param.error_bound.numerator) / param.error_bound.denominator


@pytest.mark.parametrize("n,expected", [(1, "0.3819660113"), (2, "0.7639320225"), (3, "0.1458980338")])
def test_alpha_values(gold, n, expected):
    # the 10-digit reference is the irrational value; p/q is within n * error_bound of it
    tol = n * gold.error_bound + Fraction(1, 10 ** 10)
    assert abs(alpha(gold, n).value - Fraction(expected)) < tol
    with mpmath.workdps(50):
        r = golden_oracle()
        assert abs(float(mpmath.ceil(n * r) - n * r) - float(expected)) < 1e-10


def test_ceil_matches_oracle_on_whole_certified_range(gold):
    with mpmath.workdps(50):
        r = golden_oracle()
        for n in range(1, gold.max_safe_index + 1, 7):
            assert ceil_mul(gold, n) == int(mpmath.ceil(n * r))


def test_uncertified_index_raises(gold):
    with pytest.raises(CertificationError):
        ceil_mul(gold, gold.max_safe_index + 1)


def test_rho_vec_examples(gold):
    assert rho_vec(gold, 1, 1) == (Fraction(1, 3), Fraction(1, 3))
    assert rho_vec(gold, 1, 3) == (Fraction(1, 5), Fraction(2, 5))
    assert rho_vec(gold, 3, 1) == (Fraction(2, 5), Fraction(1, 5))


def test_admissible_examples(gold):
    assert is_admissible(gold, 1, 1)
    assert not is_admissible(gold, 2, 5)
    assert admissible_indices(gold, 20) == [1, 3, 4, 6, 8, 9, 11, 12, 14, 16, 17, 19]


def test_admissibility_symmetric(gold):
    for m in range(1, 51):
        for n in range(1, 51):
            assert is_admissible(gold, m, n) == is_admissible(gold, n, m)


def test_admissibility_matches_oracle_silver(silv):
    with mpmath.workdps(50):
        r = silver_oracle()
        for n in range(1, 200):
            a = mpmath.ceil(n * r) - n * r
            assert (n in admissible_indices(silv, 200)) == (a < r)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3000))
def test_alpha_consistent_across_depth(n):
    lo, hi = golden(20), golden(24)
    assert alpha(lo, n).value - alpha(hi, n).value == n * (hi.rho - lo.rho)
    assert ceil_mul(lo, n) == ceil_mul(hi, n)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 500), st.integers(1, 500))
def test_rho_vec_expansion(m, n):
    g = golden()
    v = rho_vec(g, m, n)
    s = m + n + 1
    assert v.x == (m * g.rho + alpha(g, m).value) / s
    assert v.y == (n * g.rho + alpha(g, n).value) / s
    assert is_admissible(g, m, n) == (alpha(g, m).value < g.rho and alpha(g, n).value < g.rho)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 6), min_size=4, max_size=12))
def test_certified_prefix_is_sound(coeffs):
    p = build_param(coeffs, len(coeffs) - 1)
    x = Fraction(0)
    for a in reversed(coeffs):
        x = 1 / (a + x)
    # the value of the full finite fraction is a real number within the bound
    assert abs(x - p.rho) <= p.error_bound
    for m in range(1, min(p.max_safe_index, 200) + 1):
        assert ceil_mul(p, m) == -((-m * x.numerator) // x.denominator)
