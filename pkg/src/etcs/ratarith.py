"""Exact rational kernels: sawtooth, Dedekind sums, Hirzebruch-Jung expansions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

RationalLike = Union[int, Fraction]


def as_fraction(x: RationalLike | str) -> Fraction:
    """Coerce ints, Fractions and "num/den" strings to a Fraction."""
    if isinstance(x, float):
        raise TypeError("floats are not accepted in exact arithmetic")
    return Fraction(x)


def sawtooth(x: RationalLike) -> Fraction:
    """((x)): zero on integers, otherwise x - floor(x) - 1/2."""
    x = as_fraction(x)
    if x.denominator == 1:
        return Fraction(0)
    return x - math.floor(x) - Fraction(1, 2)


def dedekind_sum(k: int, n: int) -> Fraction:
    """S(k, n) by direct summation over j = 1..n-1."""
    if n <= 0:
        raise ValueError(f"dedekind_sum needs n >= 1, got n={n}")
    # ((j/n)) = (2j - n)/(2n) for 0 < j < n; accumulate the numerators over 4n^2.
    total = 0
    for j in range(1, n):
        r = (j * k) % n
        if r:
            total += (2 * j - n) * (2 * r - n)
    return Fraction(total, 4 * n * n)


def mod_inverse(e: int, k: int) -> int:
    """Inverse of e modulo k, as a representative in [0, k); 0 when k = 1."""
    if k <= 0:
        raise ValueError(f"modulus must be positive, got {k}")
    if k == 1:
        return 0
    if math.gcd(e, k) != 1:
        raise ValueError(f"{e} is not invertible modulo {k}")
    return pow(e, -1, k)


@dataclass(frozen=True)
class HJExpansion:
    """Minus-sign continued fraction c1 - 1/(c2 - 1/(... - 1/c_l))."""

    digits: tuple[int, ...]
    value: Fraction

    def evaluate(self) -> Fraction:
        acc = Fraction(self.digits[-1])
        for c in reversed(self.digits[:-1]):
            acc = c - 1 / acc
        return acc

    @property
    def ell(self) -> int:
        return len(self.digits)


@dataclass(frozen=True)
class ConvergentPair:
    """Columns a'_j / b'_j of the partial products of (c_i -1; 1 0)."""

    a_prime: tuple[int, ...]
    b_prime: tuple[int, ...]


def hj_expand(x: RationalLike) -> HJExpansion:
    """Expand x with c1 = ceil(x) and digits c_j >= 2 afterwards."""
    x = as_fraction(x)
    digits = []
    y = x
    while True:
        c = math.ceil(y)
        digits.append(c)
        if y == c:
            break
        y = 1 / (c - y)
    return HJExpansion(tuple(digits), x)


def _mat_mul(a, b):
    return (
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    )


def hj_convergents(exp: HJExpansion) -> ConvergentPair:
    """a'_j/b'_j is the first column of the product of the first l-j digit matrices.

    The second column of that product is (-a'_{j+1}, -b'_{j+1}), and
    a'_l/b'_l = 1/0 comes from the empty product.
    """
    ell = exp.ell
    prods = [(1, 0, 0, 1)]
    for c in exp.digits:
        prods.append(_mat_mul(prods[-1], (c, -1, 1, 0)))
    a = [0] * (ell + 1)
    b = [0] * (ell + 1)
    for j in range(ell + 1):
        mat = prods[ell - j]
        a[j], b[j] = mat[0], mat[2]
    return ConvergentPair(tuple(a), tuple(b))


def eta_multiplier_n(a: int, b: int, c: int, d: int) -> Fraction:
    """N(a,b,c,d) = (a+d)/c - 12 S(d,c), or b/d when c = 0.

    A negative c is handled by passing to -(a b; c d), which acts identically on
    the upper half-plane.
    """
    if a * d - b * c != 1:
        raise ValueError(f"({a} {b}; {c} {d}) is not in SL(2,Z)")
    if c == 0:
        return Fraction(b, d)
    if c < 0:
        a, b, c, d = -a, -b, -c, -d
    return Fraction(a + d, c) - 12 * dedekind_sum(d, c)


def fmt_frac(x: Fraction) -> str:
    """Serialize as "num/den" (or "num" for integers)."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def signed_residue(e: int, k: int) -> int:
    """Representative of e mod k in (-k/2, k/2]; 0 when k = 1."""
    r = e % k
    return r - k if 2 * r > k else r
