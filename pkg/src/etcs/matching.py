"""Rank-one configurations and assembly of the example table."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .blocks import BlockRecord, d_gamma
from .gluing import GluingData, enumerate_gluings, fundamental_group, geometry
from .nu import NuBreakdown, nu_bar_exact, nu_mod48

ALPHA_MINUS_RANK1 = (0.0,) * 19


@dataclass(frozen=True, order=True)
class Configuration:
    """Gram matrix (n+ h; h n-) of the two polarising generators."""

    n_plus: int
    n_minus: int
    h: int

    def __post_init__(self):
        if self.n_plus <= 0 or self.n_minus <= 0 or self.h < 0:
            raise ValueError("norms must be positive and h non-negative")
        if self.h * self.h >= self.n_plus * self.n_minus:
            raise ValueError("Gram matrix is not positive definite")
        if self.n_plus % 2 or self.n_minus % 2:
            raise ValueError("lattice must be even")

    @property
    def cos2_theta(self) -> Fraction:
        return Fraction(self.h * self.h, self.n_plus * self.n_minus)

    @property
    def theta(self) -> float:
        return math.acos(self.h / math.sqrt(self.n_plus * self.n_minus))


def config_angles_rank1(c: Configuration) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """(alpha_plus, alpha_minus) for a rank-one pure-angle configuration."""
    two = 2 * c.theta
    return (two, -two, 0.0), ALPHA_MINUS_RANK1


def m_rho(rho_sign: int, rho_abs: float, alpha_minus: Iterable[float], tol: float = 1e-12) -> int:
    """sign(rho)(#{alpha in {pi-|rho|, pi}} - 1) + 2 sign(rho) #{alpha in (pi-|rho|, pi)}."""
    if rho_sign == 0:
        return 0
    lo = math.pi - rho_abs
    ends = mid = 0
    for a in alpha_minus:
        if abs(a - lo) <= tol or abs(a - math.pi) <= tol:
            ends += 1
        elif lo < a < math.pi:
            mid += 1
    return rho_sign * (ends - 1) + 2 * rho_sign * mid


def m_rho_for(g: GluingData) -> int:
    """m_rho of a normalized rank-one example (all alpha^- vanish)."""
    if g.m == 0:
        return 0
    geo = geometry(g)
    rho = math.pi * geo.rho_over_pi
    return m_rho(1 if rho > 0 else -1, abs(rho), ALPHA_MINUS_RANK1)


def b3(z_plus: BlockRecord, z_minus: BlockRecord, theta_is_right_angle: bool) -> int:
    return (23 if theta_is_right_angle else 22) + z_plus.b3_gamma + z_minus.b3_gamma


@dataclass(frozen=True)
class CotorsionInfo:
    order: int
    assumption: str


def cotorsion_h3(c: Configuration) -> CotorsionInfo:
    """Torsion of L/(N+ + N-); trivial under the primitive-embedding assumption."""
    return CotorsionInfo(1, "primitive embedding assumed")


@dataclass(frozen=True)
class EtcsExample:
    gluing: GluingData
    config: Configuration
    z_plus: int
    z_minus: int
    b3: int
    pi1_order: int
    nu_bar: int
    nu_mod48: int
    nullbordant: bool
    breakdown: NuBreakdown = field(compare=False)
    row_id: int = 0


def assemble(g: GluingData, c: Configuration, zp: BlockRecord, zm: BlockRecord, row_id: int = 0) -> EtcsExample:
    if g.k_plus != zp.k or g.k_minus != zm.k:
        raise ValueError("block automorphism orders do not match the gluing data")
    if geometry(g).cos2_theta != c.cos2_theta:
        raise ValueError("gluing angle does not match the configuration")
    bd = nu_bar_exact(g, d_gamma(zp, g.eps_plus), d_gamma(zm, g.eps_minus), m_rho_for(g))
    nb = int(bd.nu_bar)
    red = nu_mod48(nb)
    return EtcsExample(
        gluing=g,
        config=c,
        z_plus=zp.id,
        z_minus=zm.id,
        b3=b3(zp, zm, g.m == 0),
        pi1_order=fundamental_group(g),
        nu_bar=nb,
        nu_mod48=red.nu,
        nullbordant=red.nullbordant,
        breakdown=bd,
        row_id=row_id,
    )


def _isqrt_exact(x: Fraction) -> Optional[int]:
    if x.denominator != 1 or x < 0:
        return None
    r = math.isqrt(x.numerator)
    return r if r * r == x.numerator else None


def enumerate_examples(catalog: Sequence[BlockRecord]) -> list[EtcsExample]:
    """Every example from pairs of catalog blocks, in table order.

    Sections run over (k+, k-) with k+ <= k-, skipping (1, 1). Inside a
    section the order is Gram matrix (n+, n-, h), then gluing (p, m, eps+),
    then blocks with Z- outer and Z+ inner.

    When k+ = k- the pair (n+, n-) is taken with n+ <= n-. For n+ < n- both
    orientations of a gluing are distinct examples; for n+ = n- the swap is a
    symmetry and the normal form with m + q <= 0 is used.
    """
    ks = sorted({b.k for b in catalog})
    by_k_norm: dict[tuple[int, int], list[BlockRecord]] = {}
    for b in sorted(catalog, key=lambda b: b.id):
        by_k_norm.setdefault((b.k, b.n_norm), []).append(b)

    out: list[EtcsExample] = []
    for kp in ks:
        for km in ks:
            if km < kp or (kp == km == 1):
                continue
            norms_p = sorted({nn for (k, nn) in by_k_norm if k == kp})
            norms_m = sorted({nn for (k, nn) in by_k_norm if k == km})
            if kp == km:
                glue_split = enumerate_gluings(kp, km, with_swap=False)
                glue_same = enumerate_gluings(kp, km, with_swap=True)
            else:
                glue_split = glue_same = enumerate_gluings(kp, km)
            cells = []
            for np_ in norms_p:
                for nm in norms_m:
                    if kp == km and np_ > nm:
                        continue
                    glues = glue_same if (kp == km and np_ == nm) else glue_split
                    for g in glues:
                        h = _isqrt_exact(geometry(g).cos2_theta * np_ * nm)
                        if h is None or h * h >= np_ * nm:
                            continue
                        cells.append(((np_, nm, h), (g.p, g.m, g.eps_plus), g))
            cells.sort(key=lambda t: (t[0], t[1]))
            for (np_, nm, h), _, g in cells:
                conf = Configuration(np_, nm, h)
                for zm in by_k_norm[(km, nm)]:
                    for zp in by_k_norm[(kp, np_)]:
                        out.append(assemble(g, conf, zp, zm, row_id=len(out) + 1))
    return out
