import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from etcs.ratarith import (
    dedekind_sum,
    fmt_frac,
    hj_convergents,
    hj_expand,
    mod_inverse,
    sawtooth,
    signed_residue,
    eta_multiplier_n,
)

moduli = st.integers(min_value=1, max_value=300)


def test_sawtooth_values():
    assert sawtooth(3) == 0
    assert sawtooth(Fraction(1, 4)) == Fraction(-1, 4)
    assert sawtooth(Fraction(-1, 4)) == Fraction(1, 4)
    with pytest.raises(TypeError):
        sawtooth(0.5)


@pytest.mark.parametrize(
    "k,n,expected",
    [(3, 10, Fraction(0)), (1, 5, Fraction(1, 5)), (2, 7, Fraction(1, 14)), (0, 7, Fraction(0)), (5, 1, Fraction(0))],
)
def test_dedekind_known(k, n, expected):
    assert dedekind_sum(k, n) == expected


def test_dedekind_closed_form_for_one():
    for n in range(1, 60):
        assert dedekind_sum(1, n) == Fraction((n - 1) * (n - 2), 12 * n)


def test_dedekind_rejects_nonpositive_modulus():
    with pytest.raises(ValueError):
        dedekind_sum(1, 0)


@given(st.integers(-10**6, 10**6), moduli)
def test_dedekind_odd_and_periodic(k, n):
    s = dedekind_sum(k, n)
    assert dedekind_sum(-k, n) == -s
    assert dedekind_sum(k + n, n) == s
    assert (6 * n * s).denominator == 1


@given(st.integers(1, 400), st.integers(1, 400))
def test_reciprocity(h, k):
    if math.gcd(h, k) != 1:
        return
    lhs = dedekind_sum(h, k) + dedekind_sum(k, h)
    assert lhs == Fraction(h * h + k * k + 1, 12 * h * k) - Fraction(1, 4)


@given(st.integers(-500, 500), st.integers(2, 300))
def test_dedekind_inverse_invariance(k, n):
    if math.gcd(k, n) == 1:
        assert dedekind_sum(mod_inverse(k, n), n) == dedekind_sum(k, n)


def test_mod_inverse():
    assert mod_inverse(2, 5) == 3
    assert mod_inverse(-1, 5) == 4
    assert mod_inverse(0, 1) == 0
    with pytest.raises(ValueError):
        mod_inverse(2, 4)


def test_hj_worked_example():
    exp = hj_expand(Fraction(-3, 10))
    assert exp.digits == (0, 4, 2, 2)
    assert exp.ell == 4
    conv = hj_convergents(exp)
    assert conv.a_prime == (-3, -2, -1, 0, 1)
    assert conv.b_prime == (10, 7, 4, 1, 0)


def test_hj_integer():
    exp = hj_expand(7)
    assert exp.digits == (7,)
    assert hj_convergents(exp).a_prime[0] == 7


def test_hj_round_trip_exhaustive():
    for b in range(1, 201):
        for a in range(-200, 201):
            if math.gcd(a, b) != 1:
                continue
            exp = hj_expand(Fraction(a, b))
            assert all(c >= 2 for c in exp.digits[1:])
            assert exp.evaluate() == Fraction(a, b)
            conv = hj_convergents(exp)
            assert Fraction(conv.a_prime[0], conv.b_prime[0]) == Fraction(a, b)


@given(st.fractions(max_denominator=10**6))
def test_hj_convergent_determinants(x):
    conv = hj_convergents(hj_expand(x))
    a, b = conv.a_prime, conv.b_prime
    assert all(a[j + 1] * b[j] - a[j] * b[j + 1] == 1 for j in range(len(a) - 1))
    assert (a[-1], b[-1]) == (1, 0)


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50))
def test_eta_multiplier_n_integral(a, c, d):
    if c == 0 or math.gcd(c, d) != 1:
        return
    # complete (a' b; c d) to SL2 using d^{-1} mod c
    a_ = pow(d, -1, abs(c)) if abs(c) > 1 else 1
    b, rem = divmod(a_ * d - 1, c)
    if rem:
        return
    assert eta_multiplier_n(a_, b, c, d).denominator == 1


def test_eta_multiplier_n_edge_cases():
    assert eta_multiplier_n(1, 3, 0, 1) == 3
    assert eta_multiplier_n(-1, 3, 0, -1) == -3
    assert eta_multiplier_n(0, -1, 1, 0) == eta_multiplier_n(0, 1, -1, 0)
    with pytest.raises(ValueError):
        eta_multiplier_n(1, 1, 1, 1)


def test_formatting_helpers():
    assert fmt_frac(Fraction(-24, 5)) == "-24/5"
    assert fmt_frac(Fraction(4)) == "4"
    assert [signed_residue(e, 5) for e in range(5)] == [0, 1, 2, -2, -1]
    assert signed_residue(1, 2) == 1 and signed_residue(0, 1) == 0
