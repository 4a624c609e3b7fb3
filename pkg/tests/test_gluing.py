import math
import warnings
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from etcs.gluing import (
    AngleChangingWarning,
    GluingData,
    covering,
    derive_eps_minus,
    enumerate_gluings,
    flip,
    fundamental_group,
    geometry,
    is_normal,
    normalize,
    quarter_turn,
    rotate,
    swap,
    symmetry_orbit,
    t_dual,
    validate,
)

EX228 = GluingData(3, 5, 1, -1, 1, 1, 10, -5)
K_PAIRS = [(1, 2), (2, 2), (2, 3), (2, 4), (3, 3), (3, 5), (4, 6), (5, 5), (2, 6), (3, 6)]


@st.composite
def valid_gluings(draw):
    kp, km = draw(st.sampled_from(K_PAIRS))
    gl = enumerate_gluings(kp, km)
    g = draw(st.sampled_from(gl))
    ops = draw(st.lists(st.sampled_from([flip, rotate, swap]), max_size=4))
    for op in ops:
        g = op(g)
    return g


def test_residues_reduced():
    g = GluingData(3, 5, -2, -1, 1, 1, 10, -5)
    assert (g.eps_plus, g.eps_minus) == (1, 4)
    assert g.signed_eps == (1, -1)
    with pytest.raises(ValueError):
        GluingData(0, 2, 0, 1, 1, 1, 1, -1)


def test_validate_example_and_failures():
    assert validate(EX228)
    bad = validate(GluingData(3, 5, 1, -1, 1, 1, 10, -4))
    assert not bad and "1.7" in bad.violated
    bad = validate(GluingData(3, 5, 2, -1, 1, 1, 10, -5))
    assert not bad and bad.violated


def test_derive_eps_minus():
    assert derive_eps_minus(3, 1, (1, 1, 10, -5)) == (5, 4)
    assert derive_eps_minus(1, 0, (1, 1, 1, -1)) == (2, 1)
    with pytest.raises(ValueError):
        derive_eps_minus(3, 1, (1, 1, 10, -4))


@given(valid_gluings())
def test_divisibility_relations(g):
    kp, km, ep, em = g.k_plus, g.k_minus, g.eps_plus, g.eps_minus
    es, ems = g.eps_plus_star, g.eps_minus_star
    m, p, n, q = g.matrix
    assert (n - ep * m + em * q - ep * em * p) % (kp * km) == 0
    assert (p - es * q + ems * m - es * ems * n) % (kp * km) == 0
    if n:
        a, b = (m - es * n), (q + ems * n)
        assert a % kp == 0 and b % km == 0
        assert (-(a // kp) * (b // km)) % abs(n) == 1 % abs(n)


@given(valid_gluings())
def test_lattice_index_four_ways(g):
    m, p, n, q = g.matrix
    vals = {
        math.gcd(math.gcd(m, p), g.k_plus),
        math.gcd(math.gcd(n, q), g.k_plus),
        math.gcd(math.gcd(m, n), g.k_minus),
        math.gcd(math.gcd(p, q), g.k_minus),
    }
    assert len(vals) == 1


@given(valid_gluings())
def test_symmetries_preserve_validity(g):
    for op in (swap, flip, rotate, t_dual):
        assert validate(op(g)), op.__name__
    assert swap(swap(g)) == g and flip(flip(g)) == g and rotate(rotate(g)) == g


@given(valid_gluings())
def test_t_dual_keeps_angle(g):
    assume(g.n != 0 and g.p != 0)
    a, b = geometry(g), geometry(t_dual(g))
    assert a.cos2_theta == b.cos2_theta


@given(valid_gluings())
def test_normalize_idempotent_and_orbit_constant(g):
    assume(g.n != 0 and g.p != 0)
    sw = g.k_plus == g.k_minus
    h = normalize(g)
    assert is_normal(h, sw)
    assert normalize(h) == h
    for other in symmetry_orbit(g, with_swap=sw):
        assert normalize(other) == h


def test_normalize_rejects_swap_across_orders():
    with pytest.raises(ValueError):
        normalize(EX228, with_swap=True)


def test_geometry_example():
    geo = geometry(EX228)
    assert geo.cos2_theta == Fraction(1, 3)
    assert geo.s_plus_sq == 50 and geo.s_minus_sq == Fraction(2)
    assert geo.s_plus_sq * geo.s_minus_sq == Fraction(EX228.n**2, EX228.p**2)


def test_geometry_right_angle():
    g = enumerate_gluings(2, 2)[0]
    assert g.matrix == (0, 2, 2, 0)
    geo = geometry(g)
    assert geo.cos2_theta == 0 and geo.s_plus_sq is None
    assert geo.theta == pytest.approx(math.pi / 2)


@given(valid_gluings())
def test_geometry_ratios_positive(g):
    assume(g.m * g.p * g.q != 0)
    geo = geometry(g)
    assert geo.s_plus_sq > 0 and geo.s_minus_sq > 0
    assert 0 <= geo.cos2_theta < 1


def test_enumerate_small_cases():
    assert [x.matrix for x in enumerate_gluings(1, 2)] == [(1, 1, 1, -1)]
    assert [x.matrix for x in enumerate_gluings(2, 2)] == [(0, 2, 2, 0), (1, 1, 1, -3), (1, 1, 3, -1), (1, 3, 1, -1)]
    right = [x for x in enumerate_gluings(5, 5) if x.m == 0]
    assert {x.signed_eps for x in right} == {(1, 1), (2, -2)}


@pytest.mark.parametrize("kp,km", [(1, 2), (2, 3), (2, 4), (3, 5), (4, 6)])
def test_swap_bijection(kp, km):
    there = {normalize(swap(x), with_swap=False) for x in enumerate_gluings(kp, km)}
    assert there == set(enumerate_gluings(km, kp))


def test_enumerate_all_valid_normal():
    for kp, km in K_PAIRS:
        for g in enumerate_gluings(kp, km):
            assert validate(g) and g.n > 0 and g.p > 0


def test_fundamental_group_and_universal_cover():
    g = GluingData(4, 6, -1, 1, 3, 21, 1, -1)
    assert validate(g) and fundamental_group(g) == 21
    u = covering(g, 21)
    assert fundamental_group(u) == 1 and (u.k_plus, u.k_minus) == (4, 2)
    assert covering(g, 1) == g
    with pytest.raises(ValueError):
        covering(g, 4)


@given(valid_gluings(), st.data())
def test_covering_composes(g, data):
    assume(g.p > 1)
    divs = [d for d in range(1, g.p + 1) if g.p % d == 0]
    l1 = data.draw(st.sampled_from(divs))
    rest = g.p // l1
    l2 = data.draw(st.sampled_from([d for d in range(1, rest + 1) if rest % d == 0]))
    c = covering(g, l1 * l2)
    assert validate(c)
    assert covering(covering(g, l1), l2).matrix[1] == c.p
    assert fundamental_group(covering(g, g.p)) == 1


def test_t_dual_example():
    d = t_dual(EX228)
    assert normalize(d) == GluingData(3, 5, -1, 1, 5, 10, 1, -1)


def test_quarter_turn_warns():
    with pytest.warns(AngleChangingWarning):
        h = quarter_turn(EX228)
    assert validate(h)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with pytest.raises(ValueError):
            quarter_turn(enumerate_gluings(2, 2)[0])


def test_covering_lands_in_smaller_group():
    g = GluingData(3, 5, -1, 1, 5, 10, 1, -1)
    c = covering(g, 10)
    assert (c.k_plus, c.k_minus, c.matrix) == (3, 1, (1, 1, 2, -1))
    assert c.signed_eps[0] == -1 and validate(c)
