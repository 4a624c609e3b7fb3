"""Compare the exact and eta-function routes to nu_bar on every table row."""

import argparse
from dataclasses import dataclass

from etcs.blocks import default_catalog
from etcs.etafn import nu_bar_analytic
from etcs.matching import enumerate_examples, m_rho_for


@dataclass
class Config:
    tol: float = 1e-9
    threshold: float = 1e-6
    show: int = 10


def run(cfg: Config) -> int:
    deltas = []
    for ex in enumerate_examples(default_catalog()):
        bd = ex.breakdown
        val = nu_bar_analytic(ex.gluing, bd.d_plus, bd.d_minus, m_rho_for(ex.gluing), tol=cfg.tol)
        deltas.append((abs(val - ex.nu_bar), ex.row_id, ex.nu_bar, val))
    deltas.sort(reverse=True)
    print("largest deviations:")
    for d, rid, exact, val in deltas[: cfg.show]:
        print(f"  row {rid:3d}  exact {exact:5d}  eta {val:+.12f}  |delta| {d:.2e}")
    bad = sum(d >= cfg.threshold for d, *_ in deltas)
    print(f"{len(deltas)} rows, {bad} above {cfg.threshold:g}")
    return int(bad > 0)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tol", type=float, default=Config.tol)
    ap.add_argument("--show", type=int, default=Config.show)
    a = ap.parse_args()
    raise SystemExit(run(Config(tol=a.tol, show=a.show)))
