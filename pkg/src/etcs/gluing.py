"""Torus-matching gluing data, their symmetries, coverings and enumeration."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from .ratarith import mod_inverse, signed_residue


@dataclass(frozen=True, order=True)
class GluingData:
    """Orders k+/k-, residues eps+/eps-, and the gluing matrix (m p; n q).

    Residues are stored reduced into [0, k); signed input is accepted.
    """

    k_plus: int
    k_minus: int
    eps_plus: int
    eps_minus: int
    m: int
    p: int
    n: int
    q: int

    def __post_init__(self):
        if self.k_plus < 1 or self.k_minus < 1:
            raise ValueError("k+ and k- must be positive")
        object.__setattr__(self, "eps_plus", self.eps_plus % self.k_plus)
        object.__setattr__(self, "eps_minus", self.eps_minus % self.k_minus)

    @property
    def matrix(self) -> tuple[int, int, int, int]:
        return (self.m, self.p, self.n, self.q)

    @property
    def det(self) -> int:
        return self.m * self.q - self.n * self.p

    @property
    def eps_plus_star(self) -> int:
        return mod_inverse(self.eps_plus, self.k_plus)

    @property
    def eps_minus_star(self) -> int:
        return mod_inverse(self.eps_minus, self.k_minus)

    @property
    def signed_eps(self) -> tuple[int, int]:
        """Residues in (-k/2, k/2], the form printed in tables."""
        return signed_residue(self.eps_plus, self.k_plus), signed_residue(self.eps_minus, self.k_minus)

    def sort_key(self) -> tuple:
        return (self.m, self.p, self.n, self.q, self.eps_plus, self.eps_minus)

    def __str__(self) -> str:
        ep, em = self.signed_eps
        return (
            f"k=({self.k_plus},{self.k_minus}) eps=({ep},{em}) "
            f"({self.m} {self.p}; {self.n} {self.q})"
        )


@dataclass(frozen=True)
class Verdict:
    valid: bool
    violated: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.valid


def validate(g: GluingData) -> Verdict:
    """Check every defining relation and list the failing ones by equation label."""
    kp, km, ep, em = g.k_plus, g.k_minus, g.eps_plus, g.eps_minus
    m, p, n, q = g.matrix
    bad: list[str] = []

    if g.det != -kp * km:
        bad.append("1.7")

    a_ok = (ep * m - n) % kp == 0 and (ep * p - q) % kp == 0
    if not a_ok:
        bad.append("1.8a")
    b_ok = (em * p + m) % km == 0 and (em * q + n) % km == 0
    if not b_ok:
        bad.append("1.8b")

    if not (
        a_ok
        and math.gcd((n - ep * m) // kp, m) == 1
        and math.gcd((q - ep * p) // kp, p) == 1
        and math.gcd(ep, kp) == 1
    ):
        bad.append("1.9a")
    if not (
        b_ok
        and math.gcd((m + em * p) // km, p) == 1
        and math.gcd((n + em * q) // km, q) == 1
        and math.gcd(em, km) == 1
    ):
        bad.append("1.9b")

    if not (math.gcd(m, n) == math.gcd(m, kp) == math.gcd(n, kp)
            and math.gcd(p, q) == math.gcd(p, kp) == math.gcd(q, kp)):
        bad.append("3.1a")
    if not (math.gcd(m, p) == math.gcd(m, km) == math.gcd(p, km)
            and math.gcd(n, q) == math.gcd(n, km) == math.gcd(q, km)):
        bad.append("3.1b")

    npmq = n * p * m * q
    if npmq > 0 or (npmq == 0 and not (n == p == 0 or m == q == 0)):
        bad.append("3.2")

    return Verdict(not bad, tuple(bad))


def _bezout(x: int, y: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*x + t*y = g = gcd(x, y) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while y:
        quo, rem = divmod(x, y)
        x, y = y, rem
        s0, s1 = s1, s0 - quo * s1
        t0, t1 = t1, t0 - quo * t1
    if x < 0:
        x, s0, t0 = -x, -s0, -t0
    return x, s0, t0


def derive_eps_minus(k_plus: int, eps_plus: int, matrix: tuple[int, int, int, int]) -> tuple[int, int]:
    """Complete (k+, eps+, matrix) to (k-, eps-) via the Bezout construction."""
    m, p, n, q = matrix
    det = m * q - n * p
    if det >= 0 or det % k_plus:
        raise ValueError("1.7: determinant must be negative and divisible by k+")
    k_minus = -det // k_plus
    if (eps_plus * m - n) % k_plus or (eps_plus * p - q) % k_plus:
        raise ValueError("1.8a violated")
    upper = (n - eps_plus * m) // k_plus
    lower = (q - eps_plus * p) // k_plus
    if math.gcd(upper, m) != 1 or math.gcd(lower, p) != 1 or math.gcd(eps_plus, k_plus) != 1:
        raise ValueError("1.9a violated")
    npmq = n * p * m * q
    if npmq > 0 or (npmq == 0 and not (n == p == 0 or m == q == 0)):
        raise ValueError("3.2 violated")
    # 1 = b*p - a*lower
    _, b, t = _bezout(p, lower)
    a = -t
    eps_minus = (a * upper - b * m) % k_minus
    return k_minus, eps_minus


@dataclass(frozen=True)
class GluingGeometry:
    cos2_theta: Fraction
    s_plus_sq: Optional[Fraction]
    s_minus_sq: Optional[Fraction]
    rho_over_pi: float
    theta: float


def geometry(g: GluingData) -> GluingGeometry:
    """Exact cos^2 of the gluing angle and circle-length ratios.

    When m = q = 0 the ratios are free and reported as None.
    """
    m, p, n, q = g.matrix
    kk = g.k_plus * g.k_minus
    cos2 = Fraction(-m * q, kk)
    if m * p * q != 0:
        sp = Fraction(-n * q, m * p)
        sm = Fraction(-m * n, p * q)
        theta = math.atan2(n, m * math.sqrt(sp))
    else:
        sp = sm = None
        theta = math.copysign(math.pi / 2, n) if n else 0.0
    return GluingGeometry(cos2, sp, sm, 1 - 2 * theta / math.pi, theta)


def fundamental_group(g: GluingData) -> int:
    """Order of the cyclic fundamental group."""
    return abs(g.p)


def covering(g: GluingData, ell: int) -> GluingData:
    """The connected ell-fold cover for ell dividing p."""
    if ell <= 0 or g.p % ell:
        raise ValueError(f"ell={ell} does not divide p={g.p}")
    gp, gm = math.gcd(ell, g.k_plus), math.gcd(ell, g.k_minus)
    kp, km = g.k_plus // gp, g.k_minus // gm
    return GluingData(
        kp,
        km,
        (ell * g.eps_plus // gp) % kp,
        (ell * g.eps_minus // gm) % km,
        g.m // gm,
        g.p // ell,
        g.n * ell // (gp * gm),
        g.q // gp,
    )


def swap(g: GluingData) -> GluingData:
    """Exchange the two halves."""
    return GluingData(g.k_minus, g.k_plus, g.eps_minus, g.eps_plus, -g.q, g.p, g.n, -g.m)


def flip(g: GluingData) -> GluingData:
    """Reverse orientation."""
    return GluingData(g.k_plus, g.k_minus, -g.eps_plus, -g.eps_minus, g.m, -g.p, -g.n, g.q)


def rotate(g: GluingData) -> GluingData:
    """Opposite Calabi-Yau structure on one side."""
    return replace(g, m=-g.m, p=-g.p, n=-g.n, q=-g.q)


def symmetry_orbit(g: GluingData, with_swap: bool = True) -> frozenset[GluingData]:
    gens = (swap, flip, rotate) if with_swap else (flip, rotate)
    seen = {g}
    frontier = [g]
    while frontier:
        cur = frontier.pop()
        for op in gens:
            nxt = op(cur)
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return frozenset(seen)


def t_dual(g: GluingData) -> GluingData:
    """Pass to the dual tori; keeps the gluing angle."""
    return GluingData(
        g.k_plus, g.k_minus, -g.eps_plus_star, -g.eps_minus_star, -g.q, g.n, g.p, -g.m
    )


class AngleChangingWarning(UserWarning):
    pass


def quarter_turn(g: GluingData) -> GluingData:
    """Angle-changing transformation theta -> +-pi/2 - theta.

    The result is valid gluing data but generally incompatible with the K3
    matching, so it is never fed back into table assembly.
    """
    if g.m == 0 and g.q == 0:
        raise ValueError("quarter turn of a right-angle gluing has infinite fundamental group")
    warnings.warn("quarter_turn changes the gluing angle", AngleChangingWarning, stacklevel=2)
    return GluingData(
        g.k_plus, g.k_minus, -g.eps_plus, g.eps_minus_star, g.p, g.m, -g.q, -g.n
    )


def is_normal(g: GluingData, with_swap: bool) -> bool:
    ok = g.n > 0 and g.p > 0 and g.m >= 0 and g.q <= 0
    if with_swap:
        ok = ok and g.m + g.q <= 0
    return ok


def normalize(g: GluingData, with_swap: Optional[bool] = None) -> GluingData:
    """Canonical orbit representative: n, p > 0, m >= 0, q <= 0.

    With the swap in play (default when k+ = k-) also m + q <= 0. Remaining ties
    go to the lexicographically smallest (m, p, n, q, eps+, eps-).
    """
    if with_swap is None:
        with_swap = g.k_plus == g.k_minus
    if with_swap and g.k_plus != g.k_minus:
        raise ValueError("the swap changes (k+, k-) unless they agree")
    cands = [h for h in symmetry_orbit(g, with_swap) if is_normal(h, with_swap)]
    if not cands:
        raise ValueError(f"no normal form for {g}")
    return min(cands, key=GluingData.sort_key)


def enumerate_gluings(k_plus: int, k_minus: int, with_swap: Optional[bool] = None) -> list[GluingData]:
    """All orbit-inequivalent valid gluing data with n, p > 0, sorted by sort_key."""
    kk = k_plus * k_minus
    found: set[GluingData] = set()
    for n in range(1, kk + 1):
        for p in range(1, kk // n + 1):
            t = kk - n * p
            if t == 0:
                mqs = [(0, 0)]
            else:
                mqs = [(m, -(t // m)) for m in range(1, t + 1) if t % m == 0]
            for m, q in mqs:
                for ep in range(k_plus):
                    if math.gcd(ep, k_plus) != 1:
                        continue
                    try:
                        km, em = derive_eps_minus(k_plus, ep, (m, p, n, q))
                    except ValueError:
                        continue
                    g = GluingData(k_plus, km, ep, em, m, p, n, q)
                    if validate(g):
                        found.add(normalize(g, with_swap))
    return sorted(found, key=GluingData.sort_key)
