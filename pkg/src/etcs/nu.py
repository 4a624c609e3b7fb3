"""Exact extended nu-invariant from Dedekind sums, and its mod-48 reduction."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .gluing import GluingData
from .ratarith import dedekind_sum


@dataclass(frozen=True)
class NuBreakdown:
    d_plus: Fraction
    d_minus: Fraction
    m_rho_term: int
    dedekind_term: Fraction
    A: int
    nu_bar: Fraction


def nu_bar_exact(
    g: GluingData,
    d_plus: Fraction,
    d_minus: Fraction,
    m_rho: int,
    eps_plus_star: int | None = None,
) -> NuBreakdown:
    """D+ + D- + 3 m_rho + 24(q/(k- n) - m/(k+ n) + 12 S(A, n)), A = (m - eps+* n)/k+.

    Any representative of the inverse of eps+ may be passed; the default is the
    one in [0, k+).
    """
    kp, km = g.k_plus, g.k_minus
    m, p, n, q = g.matrix
    if n <= 0:
        raise ValueError("the closed formula needs n > 0")
    es = g.eps_plus_star if eps_plus_star is None else eps_plus_star
    if (es * g.eps_plus - 1) % kp:
        raise ValueError(f"{es} is not inverse to eps+ modulo {kp}")
    num = m - es * n
    if num % kp:
        raise ArithmeticError("A is not an integer; gluing data are inconsistent")
    A = num // kp
    ded = 24 * (Fraction(q, km * n) - Fraction(m, kp * n) + 12 * dedekind_sum(A, n))
    d_plus, d_minus = Fraction(d_plus), Fraction(d_minus)
    total = d_plus + d_minus + 3 * m_rho + ded
    if total.denominator != 1:
        raise ArithmeticError(f"nu_bar = {total} is not an integer")
    return NuBreakdown(d_plus, d_minus, 3 * m_rho, ded, A, total)


@dataclass(frozen=True)
class NuMod48:
    nu: int
    nullbordant: bool


def nu_mod48(nu_bar: int, b1: int = 0) -> NuMod48:
    """nu = nu_bar - 24(1 + b1) mod 48; G2-nullbordant iff 3 divides nu."""
    nu_bar = Fraction(nu_bar)
    if nu_bar.denominator != 1:
        raise ValueError("nu_bar must be an integer")
    nu = (int(nu_bar) - 24 * (1 + b1)) % 48
    return NuMod48(nu, nu % 3 == 0)


def congruence_check(g: GluingData, d_plus, d_minus, m_rho: int, nu_bar) -> bool:
    """nu_bar == D+ + D- + 3 m_rho - 24(eps+*/k+ + eps-*/k-) modulo 24."""
    rhs = (
        Fraction(d_plus)
        + Fraction(d_minus)
        + 3 * m_rho
        - 24 * (Fraction(g.eps_plus_star, g.k_plus) + Fraction(g.eps_minus_star, g.k_minus))
    )
    diff = Fraction(nu_bar) - rhs
    return diff.denominator == 1 and diff.numerator % 24 == 0
