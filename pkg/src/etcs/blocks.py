"""Rank-one building blocks and the fixpoint contribution D of an automorphism."""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Union

import mpmath

from .ratarith import mod_inverse


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class FixpointOrbit:
    """Isolated fixpoints of tau^j for j in j_set, with tangent exponents.

    tau^j acts on the tangent space with eigenvalues exp(2 pi i j b_l / k).
    """

    j_set: frozenset[int]
    point_count: int
    exponents: tuple[int, int, int]


@dataclass(frozen=True)
class BlockRecord:
    id: int
    fano_label: str
    index_r: int
    degree: int
    n_norm: int
    b3_Y: int
    c2H: int
    k: int
    b3_gamma: int
    example_ref: str = ""
    fixpoints: tuple[FixpointOrbit, ...] = field(default=())


_ORBIT_RE = re.compile(r"^\s*([\d|]+)\s*:\s*(\d+)\s*:\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*$")


def parse_fixpoints(text: str) -> tuple[FixpointOrbit, ...]:
    text = text.strip()
    if not text:
        return ()
    orbits = []
    for part in text.split(";"):
        mt = _ORBIT_RE.match(part)
        if not mt:
            raise CatalogError(f"bad fixpoint orbit {part!r}")
        js = frozenset(int(j) for j in mt.group(1).split("|"))
        orbits.append(FixpointOrbit(js, int(mt.group(2)), tuple(int(mt.group(i)) for i in (3, 4, 5))))
    return tuple(orbits)


def format_fixpoints(orbits: Iterable[FixpointOrbit]) -> str:
    return ";".join(
        "|".join(str(j) for j in sorted(o.j_set)) + f":{o.point_count}:({o.exponents[0]},{o.exponents[1]},{o.exponents[2]})"
        for o in orbits
    )


def check_block(b: BlockRecord) -> None:
    """Raise CatalogError naming the block if an invariant fails."""
    if b.k == 1 and b.n_norm * b.index_r**2 != b.degree:
        raise CatalogError(f"block {b.id}: n_norm != degree / r^2")
    if b.k <= 2 and b.fixpoints:
        raise CatalogError(f"block {b.id}: involutions have no isolated fixpoints")
    for o in b.fixpoints:
        if sum(o.exponents) != 0:
            raise CatalogError(f"block {b.id}: exponents must sum to zero")
        for j in o.j_set:
            if not 0 < j < b.k or any((j * e) % b.k == 0 for e in o.exponents):
                raise CatalogError(f"block {b.id}: fixpoint at j={j} is not isolated")


def load_catalog(source: str) -> list[BlockRecord]:
    """Parse catalog text; '#' lines are comments."""
    records = []
    reader = csv.reader(io.StringIO(source))
    for lineno, row in enumerate(reader, start=1):
        if not row or row[0].lstrip().startswith("#"):
            continue
        if len(row) == 10:
            row = row + [""]
        if len(row) != 11:
            raise CatalogError(f"line {lineno}: expected 11 fields, got {len(row)}")
        try:
            ints = [int(row[i]) for i in (0, 2, 3, 4, 5, 6, 7, 8)]
            fix = parse_fixpoints(row[10])
        except (ValueError, CatalogError) as exc:
            raise CatalogError(f"line {lineno}: {exc}") from exc
        rec = BlockRecord(
            id=ints[0],
            fano_label=row[1].strip(),
            index_r=ints[1],
            degree=ints[2],
            n_norm=ints[3],
            b3_Y=ints[4],
            c2H=ints[5],
            k=ints[6],
            b3_gamma=ints[7],
            example_ref=row[9].strip(),
            fixpoints=fix,
        )
        check_block(rec)
        records.append(rec)
    return records


def load_catalog_file(path: Union[str, Path]) -> list[BlockRecord]:
    return load_catalog(Path(path).read_text(encoding="utf-8"))


def default_catalog() -> list[BlockRecord]:
    text = resources.files("etcs").joinpath("data/catalog.csv").read_text(encoding="utf-8")
    return load_catalog(text)


def catalog_by_id(catalog: Iterable[BlockRecord]) -> dict[int, BlockRecord]:
    return {b.id: b for b in catalog}


def _d_gamma_float(k: int, eps: int, orbits: Iterable[FixpointOrbit], dps: int):
    with mpmath.workdps(dps):
        total = mpmath.mpf(0)
        for j in range(1, k):
            power = (eps * j) % k
            inner = mpmath.mpf(0)
            for o in orbits:
                if power not in o.j_set:
                    continue
                # eps*j and its residue differ by a multiple of k; the zero-sum
                # exponents make the half-angle expression insensitive to that.
                halves = [mpmath.pi * eps * j * e / k for e in o.exponents]
                num = mpmath.fprod(mpmath.cos(x) for x in halves) - 1
                den = mpmath.fprod(mpmath.sin(x) for x in halves)
                inner += o.point_count * num / den
            if inner:
                total += mpmath.cot(mpmath.pi * j / k) * inner
        return 3 * total / k


def d_gamma(b: BlockRecord, eps: int) -> Fraction:
    """D of the automorphism tau^eps, reconstructed as an exact rational."""
    k = b.k
    if math.gcd(eps, k) != 1:
        raise ValueError(f"eps={eps} is not a unit modulo {k}")
    if not b.fixpoints:
        return Fraction(0)
    with mpmath.workdps(60):
        val = _d_gamma_float(k, eps, b.fixpoints, 60)
        approx = Fraction(mpmath.nstr(val, 50, strip_zeros=False)).limit_denominator(6 * k * k)
        if abs(val - mpmath.mpf(approx.numerator) / approx.denominator) > mpmath.mpf(10) ** -30:
            raise ArithmeticError(f"D for block {b.id}, eps={eps} is not a small-denominator rational")
    return approx


def integrality_check(b: BlockRecord, eps: int) -> bool:
    """D(tau^eps) - 24 eps*/k must be an integer."""
    val = d_gamma(b, eps) - Fraction(24 * mod_inverse(eps, b.k), b.k)
    return val.denominator == 1
