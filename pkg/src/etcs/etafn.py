"""Dedekind eta logarithm, the function F_{k,eps}, and the analytic route to nu_bar."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

import mpmath
import numpy as np

from .gluing import GluingData, geometry
from .ratarith import dedekind_sum, mod_inverse, eta_multiplier_n

DEFAULT_DPS = 30  # about 100 bits of mantissa


@dataclass(frozen=True)
class EtaLogValue:
    tau: complex
    value: complex
    truncation_N: int
    tail_bound: float


def _mpq(x: Fraction):
    x = Fraction(x)
    return mpmath.mpf(x.numerator) / x.denominator


@lru_cache(maxsize=None)
def divisor_sigma(n: int) -> int:
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d
            if d * d != n:
                total += n // d
        d += 1
    return total


def _tail_bound(x: float, N: int) -> float:
    """Bound for sum_{n>N} sigma(n)/n x^n, using sigma(n)/n <= n."""
    return x ** (N + 1) * ((N + 1) - N * x) / (1 - x) ** 2


def _reduce(tau):
    """Move tau into the standard fundamental domain.

    Returns (tau', (a, b, c, d)) with tau' = (a tau + b)/(c tau + d), normalized
    to c > 0 or c = 0, d > 0.
    """
    a, b, c, d = 1, 0, 0, 1
    for _ in range(10_000):
        t = int(mpmath.nint(tau.real))
        if t:
            tau = tau - t
            a, b = a - t * c, b - t * d
        if abs(tau) < 1:
            tau = -1 / tau
            a, b, c, d = -c, -d, a, b
        else:
            break
    else:  # pragma: no cover - the loop terminates for any tau in H
        raise RuntimeError("reduction did not terminate")
    if c < 0 or (c == 0 and d < 0):
        a, b, c, d = -a, -b, -c, -d
    return tau, (a, b, c, d)


def _series(tau, tol: float):
    q = mpmath.exp(2j * mpmath.pi * tau)
    x = float(abs(q))
    N = 1
    while _tail_bound(x, N) > tol:
        N += 1
    s = mpmath.mpc(0)
    qn = mpmath.mpc(1)
    for n in range(1, N + 1):
        qn *= q
        s += mpmath.mpf(divisor_sigma(n)) / n * qn
    return 1j * mpmath.pi * tau / 12 - s, N, _tail_bound(x, N)


def eta_log_mp(tau, tol: float = 1e-12, dps: int = DEFAULT_DPS):
    """L(tau) as an mpmath complex, plus (N, tail bound)."""
    with mpmath.workdps(dps):
        tau = mpmath.mpc(tau)
        if tau.imag <= 0:
            raise ValueError("tau must lie in the upper half-plane")
        red, (a, b, c, d) = _reduce(tau)
        val, N, tail = _series(red, tol)
        # red = gamma(tau); undo the transformation law
        val -= 1j * mpmath.pi / 12 * _mpq(eta_multiplier_n(a, b, c, d))
        if c != 0:
            val -= mpmath.log(-((c * tau + d) ** 2)) / 4
        return val, N, tail


def eta_log(tau: complex, tol: float = 1e-12) -> EtaLogValue:
    """Principal logarithm of the Dedekind eta function with a certified tail."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    val, N, tail = eta_log_mp(tau, tol)
    return EtaLogValue(complex(tau), complex(val), N, tail)


def eta_log_product(tau: complex, terms: int = 400, dps: int = DEFAULT_DPS) -> complex:
    """L(tau) from the product formula, summing logs termwise; slow but independent."""
    with mpmath.workdps(dps):
        tau = mpmath.mpc(tau)
        q = mpmath.exp(2j * mpmath.pi * tau)
        s = 1j * mpmath.pi * tau / 12
        qn = mpmath.mpc(1)
        for _ in range(terms):
            qn *= q
            s += mpmath.log(1 - qn)
        return complex(s)


def functional_equation_check(tau: complex, a: int, b: int, c: int, d: int, tol: float = 1e-9) -> bool:
    """Check L(gamma tau) = L(tau) + Log(-(c tau + d)^2)/4 + pi i N/12."""
    if a * d - b * c != 1:
        raise ValueError("matrix is not in SL(2,Z)")
    with mpmath.workdps(DEFAULT_DPS):
        t = mpmath.mpc(tau)
        lhs, _, _ = eta_log_mp((a * t + b) / (c * t + d), tol / 10)
        base, _, _ = eta_log_mp(t, tol / 10)
        rhs = base + 1j * mpmath.pi / 12 * _mpq(eta_multiplier_n(a, b, c, d))
        if c != 0:
            rhs += mpmath.log(-((c * t + d) ** 2)) / 4
        return abs(lhs - rhs) <= tol


def _f_mp(k: int, eps: int, s, tol: float, route: str):
    s = mpmath.mpf(s)
    if route == "inverse":
        es = mod_inverse(eps, k)
        L, _, _ = eta_log_mp((-es + 1j / s) / k, tol)
        return 2 * L.imag + mpmath.pi * es / (6 * k)
    if route == "direct":
        L, _, _ = eta_log_mp((eps + 1j * s) / k, tol)
        S = dedekind_sum(eps, k)
        return 2 * L.imag + 2 * mpmath.pi * _mpq(S) - mpmath.pi * eps / (6 * k)
    raise ValueError(f"unknown route {route!r}")


def f_value(k: int, eps: int, s: float, tol: float = 1e-12, route: str = "inverse") -> float:
    """F_{k,eps}(s) through eta at (-eps* + i/s)/k, or at (eps + i s)/k with route="direct"."""
    if math.gcd(eps, k) != 1:
        raise ValueError(f"eps={eps} is not prime to k={k}")
    if s <= 0:
        raise ValueError("s must be positive")
    with mpmath.workdps(DEFAULT_DPS):
        return float(_f_mp(k, eps, s, tol, route))


# -- independent lattice evaluation ------------------------------------------------

def _theta_derivative(k: int, eps: int, u: float, cutoff: float = 60.0) -> float:
    """F'(u) from the lattice theta series integrated in t.

    s F'(s) = (pi/k) int_1^oo (1 + t) Theta(s, t) dt, after folding t < 1 onto
    t > 1 with the Poisson symmetry; each lattice term integrates in closed form.
    """
    mmax = int(math.sqrt(cutoff * k * u / math.pi)) + 1
    nmax = int(math.sqrt(cutoff * k / (math.pi * u))) + 1
    n = np.arange(-nmax, nmax + 1)
    n = n[n != 0]
    total = 0.0
    for m in range(-mmax, mmax + 1):
        if m == 0:
            continue
        sel = n[(m - eps * n) % k == 0]
        if sel.size == 0:
            continue
        lam = math.pi * (m * m / u + sel * sel * u) / k
        keep = lam < cutoff
        lam, sel = lam[keep], sel[keep]
        total += float(np.sum(m * sel * np.exp(-lam) * (2 / lam + 1 / lam**2)))
    return math.pi / k * total / u


def theta_oracle(k: int, eps: int, s: float, coarse_tol: float = 1e-4, s0: Optional[float] = None) -> float:
    """F_{k,eps}(s) by quadrature of the lattice derivative from a small s0.

    F(s0) is taken from the leading exponential of the q-expansion, which is
    accurate to O(exp(-4 pi/(k s0))).
    """
    if s < 0.1:
        raise ValueError("oracle needs s >= 1/10")
    if s0 is None:
        s0 = min(0.05, s / 2)
    es = mod_inverse(eps, k)
    q0 = cmath.exp(2j * math.pi * (-es + 1j / s0) / k)
    start = 2 * q0.imag  # -2 Im(-q0)
    nodes, weights = np.polynomial.legendre.leggauss(24)
    panels = max(8, int(math.ceil(4 * math.log(s / s0) + 4 * (s - s0))))
    # geometric panels resolve the fast variation near s0
    edges = np.geomspace(s0, s, panels + 1)
    acc = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid, half = (lo + hi) / 2, (hi - lo) / 2
        acc += half * sum(w * _theta_derivative(k, eps, mid + half * x) for x, w in zip(nodes, weights))
    return float(start + acc)


# -- the analytic route to nu_bar ----------------------------------------------------

def _ratios(g: GluingData, s_plus: Optional[float]):
    geo = geometry(g)
    if geo.s_plus_sq is not None:
        return mpmath.sqrt(mpmath.mpf(geo.s_plus_sq.numerator) / geo.s_plus_sq.denominator), mpmath.sqrt(
            mpmath.mpf(geo.s_minus_sq.numerator) / geo.s_minus_sq.denominator
        ), geo
    # m = q = 0: the radii are free; only s+ s- = n/p is forced.
    sp = mpmath.mpf(1 if s_plus is None else s_plus)
    return sp, mpmath.mpf(g.n) / (g.p * sp), geo


def nu_bar_analytic(
    g: GluingData,
    d_plus,
    d_minus,
    m_rho: int,
    tol: float = 1e-9,
    s_plus: Optional[float] = None,
) -> float:
    """nu_bar from eta values at the two corners; real, close to an integer.

    s_plus is only used when m = q = 0, where it is a free parameter.
    """
    if g.n <= 0:
        raise ValueError("need n > 0")
    with mpmath.workdps(DEFAULT_DPS):
        sp, sm, geo = _ratios(g, s_plus)
        total = mpmath.mpf(0)
        for k, eps, s, d in ((g.k_plus, g.eps_plus, sp, d_plus), (g.k_minus, g.eps_minus, sm, d_minus)):
            es = mod_inverse(eps, k)
            L, _, _ = eta_log_mp((1j / s - es) / k, tol)
            d = Fraction(d)
            total += mpmath.mpf(d.numerator) / d.denominator - 288 / mpmath.pi * L.imag - mpmath.mpf(24 * es) / k
        theta = mpmath.pi / 2 if g.m == 0 else mpmath.atan2(g.n, g.m * sp)
        rho = mpmath.pi - 2 * theta
        total += -72 * rho / mpmath.pi + 3 * m_rho
        return float(total)


@dataclass(frozen=True)
class RationalityCheck:
    lhs: float
    rhs: Fraction
    passed: bool


def calf_rhs(g: GluingData) -> Fraction:
    A = (g.m - g.eps_plus_star * g.n) // g.k_plus
    return Fraction(1, 6) * (
        Fraction(g.m, g.k_plus * g.n) - Fraction(g.q, g.k_minus * g.n) - 12 * dedekind_sum(A, g.n)
    )


def calF_rationality(g: GluingData, tol: float = 1e-8, s_plus: Optional[float] = None) -> RationalityCheck:
    """(F+(s+) + F-(s-) + rho/2)/pi against its exact rational value."""
    with mpmath.workdps(DEFAULT_DPS):
        sp, sm, _ = _ratios(g, s_plus)
        fp = _f_mp(g.k_plus, g.eps_plus, sp, tol / 100, "inverse")
        fm = _f_mp(g.k_minus, g.eps_minus, sm, tol / 100, "inverse")
        theta = mpmath.pi / 2 if g.m == 0 else mpmath.atan2(g.n, g.m * sp)
        rho = mpmath.pi - 2 * theta
        lhs = (fp + fm + rho / 2) / mpmath.pi
    rhs = calf_rhs(g)
    return RationalityCheck(float(lhs), rhs, abs(float(lhs) - rhs.numerator / rhs.denominator) <= tol)


# -- tabulated special values ----------------------------------------------------------

def _P(x):
    return 16 * x**6 - 416 * x**5 + 2440 * x**4 + 4880 * x**3 - 12615 * x**2 - 1826 * x - 32159


def _Q(x):
    return 16 * x**6 - 32 * x**5 + 200 * x**4 + 560 * x**3 + 105 * x**2 - 402 * x - 191


def _root(f: Callable, seed: float):
    with mpmath.workdps(DEFAULT_DPS):
        return mpmath.findroot(f, (seed - 0.05, seed + 0.05), solver="bisect")


sq = mpmath.sqrt


def _c_rows():
    """(k, eps, s, S(eps,k), b, sigma, c) with s and c as zero-argument callables."""
    one = lambda: mpmath.mpf(1)  # noqa: E731
    F = Fraction
    rows = [
        (3, 1, one, F(1, 18), F(0), 1, one),
        (4, 1, one, F(1, 8), F(0), 1, one),
        (4, 1, lambda: sq(3), F(1, 8), F(1, 12), 1, one),
        (5, 1, one, F(1, 5), F(0), 1, one),
        (6, 1, one, F(5, 18), F(0), 1, one),
        (6, 1, lambda: sq(3), F(5, 18), F(1, 6), 1, one),
        (3, 1, lambda: sq(2), F(1, 18), F(-1, 6), 1, lambda: mpmath.mpf(1) / 3),
        (3, 1, lambda: sq(5), F(1, 18), F(-1, 12), 1, lambda: mpmath.mpf(2) / 3),
        (3, 1, lambda: 2 * sq(2), F(1, 18), F(1, 4), -1, lambda: mpmath.mpf(1) / 3),
        (4, 1, lambda: sq(7), F(1, 8), F(0), 1, lambda: mpmath.mpf(3) / 4),
        (4, 1, lambda: sq(15), F(1, 8), F(-1, 6), 1, lambda: mpmath.mpf(-1) / 4),
        (4, 1, lambda: sq(mpmath.mpf(5) / 3), F(1, 8), F(-1, 6), 1, lambda: mpmath.mpf(1) / 4),
        (5, 1, lambda: mpmath.mpf(2), F(1, 5), F(0), 1, lambda: mpmath.mpf(3) / 5),
        (5, 2, one, F(0), F(1, 10), -1, lambda: mpmath.mpf(3) / 5),
        (5, 2, lambda: mpmath.mpf(4), F(0), F(1, 10), -1, lambda: mpmath.mpf(4) / 5),
        (6, 1, lambda: sq(2), F(5, 18), F(-1, 12), 1, lambda: mpmath.mpf(1) / 3),
        (6, 1, lambda: sq(5), F(5, 18), F(1, 12), 1, lambda: mpmath.mpf(2) / 3),
        (6, 1, lambda: sq(11), F(5, 18), F(1, 6), 1, lambda: mpmath.mpf(5) / 6),
        (3, 1, lambda: mpmath.mpf(2), F(1, 18), F(1, 6), -1, lambda: sq(3) - 1),
        (4, 1, lambda: sq(2), F(1, 8), F(-1, 8), 1, lambda: sq(2) - 1),
        (4, 1, lambda: sq(5), F(1, 8), F(-1, 4), 1, lambda: (1 - sq(5)) / 2),
        (4, 1, lambda: mpmath.mpf(3), F(1, 8), F(0), 1, lambda: sq(3) - 1),
        (4, 1, lambda: mpmath.mpf(5), F(1, 8), F(0), 1, lambda: 3 * sq(5) - 6),
        (5, 2, lambda: mpmath.mpf(2), F(0), F(1, 10), -1, lambda: 3 * sq(5) - 6),
        (6, 1, lambda: sq(7), F(5, 18), F(2, 3), -1, lambda: (1 - sq(21)) / 4),
        (3, 1, lambda: sq(3), F(1, 18), F(-1, 6), 1, lambda: mpmath.cbrt(2) - 1),
        (4, 1, lambda: 3 * sq(3), F(1, 8), F(-1, 12), 1, lambda: mpmath.cbrt(2) - 1),
        (3, 1, lambda: 2 * sq(5), F(1, 18), F(-1, 6), 1,
         lambda: (1 - sq(5) + sq(5 * (sq(5) - 1) / 2)) / 3),
        (3, 1, lambda: 4 * sq(2), F(1, 18), F(-1, 12), 1,
         lambda: (6 - 5 * sq(2) + (4 * sq(2) + 2) * sq(sq(2) - 1)) / 6),
        (3, 1, lambda: sq(5) / 2, F(1, 18), F(0), 1,
         lambda: (sq(5) - 1 + sq(5 * (sq(5) - 1) / 2)) / 3),
        (4, 1, lambda: 3 * sq(7), F(1, 8), F(0), 1,
         lambda: (9 + sq(21) - sq(26 * sq(21) - 114)) / 16),
        (4, 1, lambda: 3 / sq(7), F(1, 8), F(0), 1,
         lambda: (9 + sq(21) + sq(26 * sq(21) - 114)) / 16),
        (3, 1, lambda: 5 * sq(2), F(1, 18), F(1, 6), -1, lambda: _root(lambda c: _P(3 * c), 0.766)),
        (3, 1, lambda: 5 / sq(2), F(1, 18), F(0), 1, lambda: _root(lambda c: _P(-3 * c), 0.940)),
        (5, 1, lambda: sq(2), F(1, 5), F(0), 1, lambda: _root(_Q, 0.861)),
        (5, 2, lambda: sq(2), F(0), F(1, 10), -1, lambda: _root(lambda c: _Q(-c), 0.634)),
    ]
    return rows


@dataclass(frozen=True)
class SpecialValueRow:
    k: int
    eps: int
    s: float
    S: Fraction
    b: Fraction
    sigma: int
    c: float
    sextic: bool
    f: float
    expected: float
    f_dual: float
    expected_dual: float
    dedekind_ok: bool
    passed: bool
    pair_passed: bool


@dataclass
class SpecialValueReport:
    rows: list[SpecialValueRow] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed and r.pair_passed and r.dedekind_ok for r in self.rows)


def special_values_check(tol: float = 1e-9) -> SpecialValueReport:
    """Compare F and its companion at 1/s with the tabulated closed forms."""
    report = SpecialValueReport()
    n_rows = len(_c_rows())
    for idx, (k, eps, s_fn, S, b, sigma, c_fn) in enumerate(_c_rows()):
        with mpmath.workdps(DEFAULT_DPS):
            s, c = s_fn(), c_fn()
            es = mod_inverse(eps, k)
            f = _f_mp(k, eps, s, tol / 100, "inverse")
            fd = _f_mp(k, es, 1 / s, tol / 100, "inverse")
            Sm = mpmath.mpf(S.numerator) / S.denominator
            bm = mpmath.mpf(b.numerator) / b.denominator
            exp_f = mpmath.pi * (Sm + bm) + sigma * mpmath.acos(c) / 2
            exp_d = mpmath.pi * (Sm - bm) - sigma * mpmath.acos(c) / 2
            report.rows.append(
                SpecialValueRow(
                    k, eps, float(s), S, b, sigma, float(c), idx >= n_rows - 4,
                    float(f), float(exp_f), float(fd), float(exp_d),
                    dedekind_sum(eps, k) == S,
                    abs(f - exp_f) <= tol and abs(fd - exp_d) <= tol,
                    abs(f + fd - 2 * mpmath.pi * Sm) <= tol,
                )
            )
    return report


@dataclass(frozen=True)
class FamilyCheck:
    k: int
    eps: int
    arg: float
    value: float
    closed_form: float
    passed: bool
    label: str


def special_family_check(tol: float = 1e-9, eps: int = 1, ks: range = range(2, 7)) -> list[FamilyCheck]:
    """Arctan closed forms at 1/sqrt(k^2-1) and at sqrt(m/n) with m + n = 2k.

    With eps = 1 this is the literal statement; for k >= 3 it fails and the
    identities hold for eps = -1 instead.
    """
    out = []
    with mpmath.workdps(DEFAULT_DPS):
        pi = mpmath.pi
        for k in ks:
            s = 1 / sq(k * k - 1)
            v = _f_mp(k, eps, s, tol / 100, "inverse")
            cf = mpmath.atan(sq(mpmath.mpf(k + 1) / (k - 1))) - (3 * k + 2) * pi / (12 * k)
            out.append(FamilyCheck(k, eps, float(s), float(v), float(cf), abs(v - cf) <= tol, "inverse-sqrt"))
            vb = _f_mp(k, eps, sq(k * k - 1), tol / 100, "inverse")
            mid = -vb - mpmath.mpf((k - 1) * (k - 2)) / (6 * k) * pi
            out.append(FamilyCheck(k, eps, float(s), float(v), float(mid), abs(v - mid) <= tol, "printed-middle"))
            for m in range(1, 2 * k):
                n = 2 * k - m
                s2 = sq(mpmath.mpf(m) / n)
                v2 = _f_mp(k, eps, s2, tol / 100, "inverse")
                cf2 = mpmath.atan(s2) - (k * m + 2) * pi / (12 * k)
                out.append(
                    FamilyCheck(k, eps, float(s2), float(v2), float(cf2), abs(v2 - cf2) <= tol, f"sqrt({m}/{n})")
                )
    return out
