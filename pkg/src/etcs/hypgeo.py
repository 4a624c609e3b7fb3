"""Geodesics, cuspidal angles and the ideal polygon behind the Dedekind-sum formula."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .gluing import GluingData, _bezout, geometry
from .ratarith import ConvergentPair, dedekind_sum, hj_convergents, hj_expand


@dataclass(frozen=True, order=True)
class CuspPoint:
    """Reduced fraction e/f with f >= 0; (1, 0) is infinity."""

    e: int
    f: int

    def __post_init__(self):
        e, f = self.e, self.f
        if f < 0 or (f == 0 and e < 0):
            e, f = -e, -f
        g = math.gcd(e, f)
        if g == 0:
            raise ValueError("0/0 is not a cusp")
        object.__setattr__(self, "e", e // g)
        object.__setattr__(self, "f", f // g)

    @classmethod
    def of(cls, x: Union["CuspPoint", Fraction, int, None]) -> "CuspPoint":
        """Fractions and ints as cusps; None stands for infinity."""
        if isinstance(x, CuspPoint):
            return x
        if x is None:
            return INF
        x = Fraction(x)
        return cls(x.numerator, x.denominator)

    @property
    def is_inf(self) -> bool:
        return self.f == 0

    def value(self) -> Fraction:
        if self.is_inf:
            raise ValueError("infinity has no rational value")
        return Fraction(self.e, self.f)

    def __str__(self) -> str:
        return "oo" if self.is_inf else str(self.value())


INF = CuspPoint(1, 0)

CuspLike = Union[CuspPoint, Fraction, int, None]


def cusp_angle(cusp: CuspLike, x: CuspLike, y: CuspLike) -> Fraction:
    """(x - y)/((f x - e)(f y - e)) at the cusp e/f, in homogeneous form."""
    c, a, b = CuspPoint.of(cusp), CuspPoint.of(x), CuspPoint.of(y)
    da = c.f * a.e - c.e * a.f
    db = c.f * b.e - c.e * b.f
    if da == 0 or db == 0:
        raise ValueError("geodesic endpoint coincides with the cusp")
    return Fraction(a.e * b.f - b.e * a.f, da * db)


def reflection_fixed(a: CuspLike, b: CuspLike) -> bool:
    """Whether the geodesic between two cusps has |det| in {1, 2}."""
    a, b = CuspPoint.of(a), CuspPoint.of(b)
    return abs(a.e * b.f - a.f * b.e) in (1, 2)


def cusp_to_infinity(a: CuspLike, b: CuspLike) -> tuple[tuple[int, int, int, int], int, int]:
    """tau in SL2(Z) with tau(a) = oo, and (k, eps) with tau(b) = eps/k mod Z.

    k = e h - f g for a = e/f, b = g/h; eps is the unit with (g, h) = eps (e, f) mod k.
    """
    a, b = CuspPoint.of(a), CuspPoint.of(b)
    e, f, g_, h = a.e, a.f, b.e, b.f
    k = e * h - f * g_
    if k <= 0:
        raise ValueError("expects e h - f g > 0")
    # x e + y f = 1
    _, x, y = _bezout(e, f)
    tau = (x, y, -f, e)
    u, v = _act(tau, g_, h)
    if v != k:
        raise AssertionError("tau does not carry b to height k")
    eps = u % k
    if (g_ - eps * e) % k or (h - eps * f) % k:
        raise AssertionError("eps does not satisfy the divisibility condition")
    return tau, k, eps


@dataclass(frozen=True)
class Geodesics:
    plus_foot: Fraction
    minus_ends: tuple[CuspPoint, CuspPoint]


def geodesic_endpoints(g: GluingData) -> Geodesics:
    """gamma+ is the vertical line over eps+/k+; gamma- joins the two returned cusps."""
    if g.n <= 0 or g.m < 0:
        raise ValueError("expects normalized data with m >= 0, n > 0")
    base = Fraction(g.eps_plus, g.k_plus)
    first = INF if g.m == 0 else CuspPoint.of(base - Fraction(g.n, g.k_plus * g.m))
    second = CuspPoint.of(base - Fraction(g.q, g.k_plus * g.p))
    return Geodesics(base, (first, second))


def corner_point(g: GluingData) -> complex:
    """The intersection (eps+ + i s+)/k+ of the two geodesics."""
    geo = geometry(g)
    if geo.s_plus_sq is None:
        raise ValueError("s+ is free when m = q = 0")
    return complex(g.eps_plus, math.sqrt(geo.s_plus_sq)) / g.k_plus


def intersection_angle_check(g: GluingData, tol: float = 1e-9) -> bool:
    """Angle from upward gamma+ to gamma- (heading to its second end) is 2 theta."""
    theta = geometry(g).theta
    if g.m == 0:
        # gamma- runs down the same vertical line
        return abs(math.pi - 2 * theta) <= tol
    ends = geodesic_endpoints(g).minus_ends
    x1, x2 = float(ends[0].value()), float(ends[1].value())
    z = corner_point(g)
    centre, radius = (x1 + x2) / 2, abs(x2 - x1) / 2
    if abs(abs(z - centre) - radius) > tol * max(1.0, radius):
        return False
    tangent = -1j * (z - centre) if x2 > centre else 1j * (z - centre)
    angle = math.acos(max(-1.0, min(1.0, tangent.imag / abs(tangent))))
    return abs(angle - 2 * theta) <= tol


@dataclass(frozen=True)
class IdealPolygon:
    corners: tuple[CuspPoint, ...]
    corners_prime: tuple[CuspPoint, ...]
    raw_prime: tuple[tuple[int, int], ...]
    finite_vertex: complex
    ell: int
    digits: tuple[int, ...]
    convergents: ConvergentPair
    C: tuple[int, int, int, int]


def _act(M, u: int, v: int) -> tuple[int, int]:
    a, b, c, d = M
    return a * u + b * v, c * u + d * v


def build_polygon(g: GluingData, eps_plus_star: int | None = None) -> IdealPolygon:
    """Corners from the minus-sign continued fraction of (m - eps+* n)/(k+ n).

    Another representative of eps+* changes r in C, which translates the
    picture by an integer and leaves every cusp angle alone.
    """
    if g.n <= 0 or g.m <= 0:
        raise ValueError("the polygon is built for m > 0, n > 0")
    kp, ep = g.k_plus, g.eps_plus
    es = g.eps_plus_star if eps_plus_star is None else eps_plus_star
    num = g.m - es * g.n
    if num % kp:
        raise ValueError("(m - eps+* n)/k+ is not an integer")
    A = num // kp
    if math.gcd(A, g.n) != 1:
        raise ValueError("(A, n) must be coprime")
    r, rem = divmod(ep * es - 1, kp)
    assert rem == 0
    C = (es, -r, -kp, ep)
    C_inv = (ep, r, kp, es)
    exp = hj_expand(Fraction(A, g.n))
    conv = hj_convergents(exp)
    raw = tuple(zip(conv.a_prime, conv.b_prime))
    prime = tuple(CuspPoint(a, b) for a, b in raw)
    back = tuple(CuspPoint(*_act(C_inv, a, b)) for a, b in raw)
    return IdealPolygon(back, prime, raw, corner_point(g), exp.ell, exp.digits, conv, C)


@dataclass(frozen=True)
class PolygonIdentity:
    angle_sum: Fraction
    lhs: Fraction
    rhs: Fraction
    b1_congruence: bool
    moebius_ok: bool
    adjacency_ok: bool

    @property
    def passed(self) -> bool:
        return (
            self.angle_sum == self.lhs == self.rhs
            and self.b1_congruence
            and self.moebius_ok
            and self.adjacency_ok
        )


def polygon_identity_check(g: GluingData, eps_plus_star: int | None = None) -> PolygonIdentity:
    """Total cuspidal angle of the polygon against its Dedekind-sum expression."""
    poly = build_polygon(g, eps_plus_star)
    b = poly.convergents.b_prime
    ell, c = poly.ell, poly.digits
    kp, km = g.k_plus, g.k_minus
    es = g.eps_plus_star if eps_plus_star is None else eps_plus_star
    m, p, n, q = g.matrix
    P = poly.corners_prime

    total = Fraction(0)
    moebius = True
    for j in range(ell - 1):
        ang = cusp_angle(P[j + 1], P[j], P[j + 2])
        total += ang
        if ang != c[ell - 1 - j]:
            moebius = False
        back = poly.corners
        if cusp_angle(back[j + 1], back[j], back[j + 2]) != ang:
            moebius = False
    other_end = CuspPoint(p - es * q, kp * q) if q else INF
    total += cusp_angle(P[0], other_end, INF) + cusp_angle(P[0], INF, P[1])
    total += cusp_angle(INF, P[ell - 1], Fraction(-es, kp))

    lhs = (Fraction(-q, km * n) + Fraction(b[1], b[0])) + (Fraction(es, kp) + c[0]) + sum(c[1:])
    rhs = 3 * (ell - 1) + Fraction(m, kp * n) - Fraction(q, km * n) - 12 * dedekind_sum(-b[1], n)

    ems = g.eps_minus_star
    cong = (q + ems * n) % km == 0 and (b[1] - (q + ems * n) // km) % n == 0
    adj = all(
        poly.raw_prime[j + 1][0] * poly.raw_prime[j][1] - poly.raw_prime[j][0] * poly.raw_prime[j + 1][1] == 1
        for j in range(ell)
    ) and all(reflection_fixed(poly.corners[j], poly.corners[j + 1]) for j in range(ell))
    return PolygonIdentity(total, lhs, rhs, cong, moebius, adj)


def aggregate_check(g: GluingData) -> bool:
    """288 area/(4 pi) - 24 (cusp sum) against 72 rho/pi + 24(...), part by part.

    Both sides are r + t * theta/pi with rational r, t; the two parts are
    compared separately.
    """
    ident = polygon_identity_check(g)
    poly = build_polygon(g)
    ell = poly.ell
    A = (g.m - g.eps_plus_star * g.n) // g.k_plus
    # area/(4 pi) = ell/4 - theta/(2 pi)
    left_rat = 288 * Fraction(ell, 4) - 24 * ident.angle_sum
    left_theta = Fraction(-144)
    right_rat = 72 + 24 * (
        Fraction(g.q, g.k_minus * g.n) - Fraction(g.m, g.k_plus * g.n) + 12 * dedekind_sum(A, g.n)
    )
    right_theta = Fraction(-144)
    return left_rat == right_rat and left_theta == right_theta


def gauss_bonnet_area(ell: int, theta_over_pi: Fraction) -> Fraction:
    """Area/pi of an (ell+2)-gon with ell+1 ideal corners and one corner of angle 2 theta."""
    return Fraction(ell + 2 - 2) - 2 * theta_over_pi


def triangle_sanity() -> bool:
    """The ideal triangle 0, 1, oo: cusp angles sum to 3, and 3/12 equals area/(4 pi)."""
    s = cusp_angle(0, INF, 1) + cusp_angle(1, 0, INF) + cusp_angle(INF, 1, 0)
    area_over_pi = gauss_bonnet_area(1, Fraction(0))
    return s == 3 and s / 12 == area_over_pi / 4


def polygon_svg(poly: IdealPolygon, width: int = 480) -> str:
    """Diagnostic drawing of the polygon in the upper half-plane."""
    finite = [float(c.value()) for c in poly.corners if not c.is_inf]
    xs = finite + [poly.finite_vertex.real]
    lo, hi = min(xs) - 0.5, max(xs) + 0.5
    scale = width / (hi - lo)
    height = int(width * 0.6)

    def px(x: float, y: float = 0.0) -> tuple[float, float]:
        return (x - lo) * scale, height - y * scale

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">']
    parts.append(f'<line x1="0" y1="{height}" x2="{width}" y2="{height}" stroke="black"/>')
    pts = list(poly.corners)
    for u, v in zip(pts[:-1], pts[1:]):
        if u.is_inf or v.is_inf:
            x = float((v if u.is_inf else u).value())
            x0, y0 = px(x)
            parts.append(f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{x0:.2f}" y2="0" stroke="blue"/>')
            continue
        a, b = sorted((float(u.value()), float(v.value())))
        r = (b - a) / 2 * scale
        x0, y0 = px(a)
        x1, _ = px(b)
        parts.append(f'<path d="M {x0:.2f} {y0:.2f} A {r:.2f} {r:.2f} 0 0 1 {x1:.2f} {y0:.2f}" fill="none" stroke="blue"/>')
    fx, fy = px(poly.finite_vertex.real, poly.finite_vertex.imag)
    parts.append(f'<circle cx="{fx:.2f}" cy="{fy:.2f}" r="3" fill="red"/>')
    parts.append("</svg>")
    return "\n".join(parts)
