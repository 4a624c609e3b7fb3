import math
from dataclasses import replace
from fractions import Fraction

import pytest

from etcs.blocks import (
    CatalogError,
    FixpointOrbit,
    d_gamma,
    format_fixpoints,
    integrality_check,
    load_catalog,
    parse_fixpoints,
)


def units(k):
    return [e for e in range(-(k // 2), k // 2 + 1) if math.gcd(e, k) == 1]


def test_catalog_shape(catalog):
    assert len(catalog) == 29
    assert len({b.id for b in catalog}) == 29
    assert {b.k for b in catalog} == {1, 2, 3, 4, 5, 6}


def test_fixpoint_round_trip():
    text = "1|2|3|4:1:(1,1,-2)"
    orbits = parse_fixpoints(text)
    assert orbits == (FixpointOrbit(frozenset({1, 2, 3, 4}), 1, (1, 1, -2)),)
    assert format_fixpoints(orbits) == text
    assert parse_fixpoints("") == ()
    with pytest.raises(CatalogError):
        parse_fixpoints("1:2:(1,1)")


def test_loader_reports_line():
    good = "# comment\n1,X,1,2,2,0,0,1,0,,\n"
    assert len(load_catalog(good)) == 1
    with pytest.raises(CatalogError, match="line 2"):
        load_catalog("# comment\n1,X,1,2,2\n")
    with pytest.raises(CatalogError, match="line 1"):
        load_catalog("1,X,1,2,2,0,0,1,0,,abc\n")


def test_loader_rejects_invariant_violation():
    # exponents must sum to zero
    with pytest.raises(CatalogError, match="block 7"):
        load_catalog('7,X,1,6,6,0,0,3,0,,"1|2:1:(1,1,1)"\n')


@pytest.mark.parametrize("eps", [1, -1, 2, -2])
def test_d_block12(blocks, eps):
    assert d_gamma(blocks[12], eps) == Fraction(24, 5 * eps)


@pytest.mark.parametrize("bid,factor", [(11, 4), (13, 2), (16, 2)])
def test_d_linear_blocks(blocks, bid, factor):
    for eps in units(blocks[bid].k):
        assert d_gamma(blocks[bid], eps) == factor * eps


def test_d_vanishes_without_fixpoints(catalog):
    for b in catalog:
        if not b.fixpoints:
            assert all(d_gamma(b, e) == 0 for e in units(b.k))


def test_d_odd_and_lift_invariant(catalog):
    for b in catalog:
        if not b.fixpoints:
            continue
        k = b.k
        relift = replace(
            b,
            fixpoints=tuple(
                FixpointOrbit(o.j_set, o.point_count, (o.exponents[0] + k, o.exponents[1] + k, o.exponents[2] - 2 * k))
                for o in b.fixpoints
            ),
        )
        for e in units(k):
            assert d_gamma(b, -e) == -d_gamma(b, e)
            assert d_gamma(relift, e) == d_gamma(b, e)


def test_integrality_all_blocks(catalog):
    for b in catalog:
        for e in units(b.k):
            assert integrality_check(b, e), (b.id, e)


def test_d_rejects_non_unit(blocks):
    with pytest.raises(ValueError):
        d_gamma(blocks[13], 2)
