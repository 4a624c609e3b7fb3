import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from etcs.etafn import (
    _tail_bound,
    calF_rationality,
    divisor_sigma,
    eta_log,
    eta_log_mp,
    eta_log_product,
    f_value,
    functional_equation_check,
    nu_bar_analytic,
    special_family_check,
    special_values_check,
    theta_oracle,
)
from etcs.gluing import GluingData
from etcs.matching import m_rho_for
from etcs.ratarith import dedekind_sum, mod_inverse

# F_{3,1}(sqrt 2) from the lattice quadrature, frozen
F_3_1_SQRT2 = 0.2664138582715214


def test_divisor_sigma():
    assert [divisor_sigma(n) for n in range(1, 11)] == [1, 3, 4, 7, 6, 12, 8, 15, 13, 18]


def test_tail_bound_dominates():
    x, N = 0.3, 5
    tail = sum(n * x**n for n in range(N + 1, 400))
    assert tail <= _tail_bound(x, N) * (1 + 1e-12)


@pytest.mark.parametrize("tau", [0.3 + 0.8j, 1j, -0.45 + 0.9j, 0.1 + 2.5j])
def test_eta_against_product(tau):
    assert abs(eta_log(tau).value - eta_log_product(tau)) < 1e-12


def test_eta_at_i():
    # eta(i) = Gamma(1/4) / (2 pi^(3/4))
    want = math.log(math.gamma(0.25) / (2 * math.pi**0.75))
    assert eta_log(1j).value == pytest.approx(want, abs=1e-13)


def test_eta_small_imaginary_part_uses_transformation():
    tau = 0.2 + 0.01j
    val = eta_log(tau)
    assert val.truncation_N <= 25
    assert abs(val.value - eta_log_product(tau, terms=3000)) < 1e-10


def test_eta_rejects_lower_half_plane():
    with pytest.raises(ValueError):
        eta_log(0.5 - 1j)
    with pytest.raises(ValueError):
        eta_log(1j, tol=0)


def test_truncation_certified():
    for tau in (0.31 + 0.9j, -0.2 + 0.05j):
        a, _, _ = eta_log_mp(tau, 1e-9)
        b, _, _ = eta_log_mp(tau, 1e-11)
        assert abs(complex(a - b)) < 1e-9


sl2 = st.tuples(st.integers(-6, 6), st.integers(-6, 6)).filter(lambda cd: math.gcd(*cd) == 1 and cd[0] != 0)


@settings(max_examples=30, deadline=None)
@given(sl2, st.floats(-2, 2), st.floats(0.05, 3))
def test_functional_equation(cd, x, y):
    c, d = cd
    a = pow(d, -1, abs(c)) if abs(c) > 1 else 1
    b, rem = divmod(a * d - 1, c)
    assert rem == 0
    assert functional_equation_check(complex(x, y), a, b, c, d)


def test_functional_equation_upper_triangular():
    assert functional_equation_check(0.3 + 0.7j, 1, 3, 0, 1)
    assert functional_equation_check(0.3 + 0.7j, -1, 2, 0, -1)


samples = st.tuples(st.integers(2, 6), st.integers(1, 5), st.floats(0.1, 10)).filter(
    lambda t: math.gcd(t[0], t[1]) == 1
)


@settings(max_examples=50, deadline=None)
@given(samples)
def test_routes_agree(t):
    k, eps, s = t
    assert f_value(k, eps, s) == pytest.approx(f_value(k, eps, s, route="direct"), abs=2e-12)


@settings(max_examples=30, deadline=None)
@given(samples)
def test_odd_in_eps(t):
    k, eps, s = t
    assert f_value(k, -eps, s) == pytest.approx(-f_value(k, eps, s), abs=2e-12)


@settings(max_examples=30, deadline=None)
@given(samples)
def test_inversion_pair(t):
    k, eps, s = t
    lhs = f_value(k, mod_inverse(eps, k), 1 / s) + f_value(k, eps, s)
    S = dedekind_sum(eps, k)
    assert lhs == pytest.approx(2 * math.pi * S.numerator / S.denominator, abs=2e-12)


def test_f_value_input_checks():
    with pytest.raises(ValueError):
        f_value(4, 2, 1.0)
    with pytest.raises(ValueError):
        f_value(3, 1, -1.0)
    with pytest.raises(ValueError):
        f_value(3, 1, 1.0, route="sideways")


@pytest.mark.parametrize("k,eps,s", [(3, 1, math.sqrt(2)), (5, 2, 0.7), (4, 1, 0.9)])
def test_theta_oracle(k, eps, s):
    assert abs(f_value(k, eps, s) - theta_oracle(k, eps, s)) < 1e-4


def test_theta_oracle_frozen_value():
    assert theta_oracle(3, 1, math.sqrt(2)) == pytest.approx(F_3_1_SQRT2, abs=1e-10)
    with pytest.raises(ValueError):
        theta_oracle(3, 1, 0.05)


def test_analytic_example():
    g = GluingData(3, 5, 1, -1, 1, 1, 10, -5)
    assert nu_bar_analytic(g, 0, -4.8, -1) == pytest.approx(-11, abs=1e-8)


def test_analytic_every_row(examples):
    for ex in examples:
        bd = ex.breakdown
        val = nu_bar_analytic(ex.gluing, bd.d_plus, bd.d_minus, m_rho_for(ex.gluing))
        assert abs(val - ex.nu_bar) < 1e-6, ex.row_id


def test_right_angle_rows_free_radius(examples):
    for ex in examples:
        if ex.gluing.m != 0:
            continue
        bd = ex.breakdown
        for sp in (0.5, 1.0, 2.0):
            val = nu_bar_analytic(ex.gluing, bd.d_plus, bd.d_minus, 0, s_plus=sp)
            assert abs(val - ex.nu_bar) < 1e-6


def test_rationality_sample(examples):
    rng = random.Random(3)
    for ex in rng.sample(examples, 25):
        res = calF_rationality(ex.gluing)
        assert res.passed, (ex.row_id, res)


def test_special_values():
    rep = special_values_check(1e-9)
    assert len(rep.rows) == 36 and sum(r.sextic for r in rep.rows) == 4
    assert rep.passed


def test_special_families_hold_for_minus_one():
    assert all(f.passed for f in special_family_check(eps=-1))


def test_special_families_literal_sign():
    # the eps = +1 reading only survives for k = 2, where F_{2,1} vanishes identically
    res = special_family_check(eps=1)
    assert all(f.passed for f in res if f.k == 2)
    assert not any(f.passed for f in res if f.k >= 3 and f.label == "inverse-sqrt")
