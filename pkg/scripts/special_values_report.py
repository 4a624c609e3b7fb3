"""Print the special-value table check and both sign readings of the arctan families."""

import argparse
from dataclasses import dataclass

from etcs.etafn import special_family_check, special_values_check


@dataclass
class Config:
    tol: float = 1e-9


def run(cfg: Config) -> int:
    rep = special_values_check(cfg.tol)
    for r in rep.rows:
        flag = "ok" if r.passed and r.pair_passed else "FAIL"
        tag = " sextic" if r.sextic else ""
        print(f"k={r.k} eps={r.eps:+d} s={r.s:.6f} F={r.f:+.12f} expected={r.expected:+.12f} {flag}{tag}")
    print(f"table: {'all rows pass' if rep.passed else 'failures'}")
    for eps in (1, -1):
        fam = special_family_check(cfg.tol, eps=eps)
        bad = [(f.k, f.label) for f in fam if not f.passed]
        print(f"families with eps={eps:+d}: {len(fam) - len(bad)}/{len(fam)} hold")
        for k, label in bad[:6]:
            print(f"  fails: k={k} {label}")
    return int(not rep.passed)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tol", type=float, default=Config.tol)
    raise SystemExit(run(Config(tol=ap.parse_args().tol)))
