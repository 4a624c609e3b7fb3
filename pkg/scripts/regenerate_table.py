"""Regenerate the example table and diff it against the frozen golden copy."""

import argparse
import csv
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from etcs.blocks import default_catalog
from etcs.cli import TableRow, rows_to_csv
from etcs.matching import enumerate_examples

ROOT = Path(__file__).resolve().parent.parent


@dataclass
class Config:
    golden: Path = ROOT / "tests" / "data" / "golden_table.csv"
    out: Path | None = None


def run(cfg: Config) -> int:
    rows = [TableRow.from_example(ex) for ex in enumerate_examples(default_catalog())]
    if cfg.out:
        cfg.out.write_text(rows_to_csv(rows), encoding="utf-8")
    with open(cfg.golden, newline="") as fh:
        gold = list(csv.DictReader(fh))
    diffs = 0
    for row, g in zip(rows, gold):
        for key, want in g.items():
            have = getattr(row, key)
            same = Fraction(have) == Fraction(want) if key == "cos2_theta" else int(want) == have
            if not same:
                diffs += 1
                print(f"row {row.row_id}: {key} = {have}, golden {want}")
    print(f"{len(rows)} rows generated, {len(gold)} golden, {diffs} field differences")
    return int(diffs > 0 or len(rows) != len(gold))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path)
    raise SystemExit(run(Config(out=ap.parse_args().out)))
