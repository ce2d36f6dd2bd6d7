"""Write the E1/E2/E3 branch curves for both cubic variants and print the minima.

Usage: python scripts/reproduce_figures.py [OUTDIR]
"""
import sys
from pathlib import Path

from twofermion import io
from twofermion.constants import CouplingConfig
from twofermion.cubic import VARIANTS
from twofermion.roots import DEFAULT_BRACKETS, NoInteriorMinimumError, branch_scan, default_grid, minimize_branch


def main(outdir="figures"):
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    cfg = CouplingConfig()
    grid = default_grid()
    for variant in VARIANTS:
        table = branch_scan(cfg.alpha, variant, grid)
        path = out / f"branches_{variant.value}.csv"
        path.write_text(io.scan_csv(table), encoding="utf-8")
        print(f"wrote {path}")
        for branch, bracket in DEFAULT_BRACKETS.items():
            try:
                bm = minimize_branch(cfg.alpha, variant, branch, bracket)
            except NoInteriorMinimumError as exc:
                print(f"  {variant.value} branch {branch}: {exc}")
                continue
            print(f"  {variant.value} branch {branch}: beta*={bm.beta_star:.9g}  E*={bm.E_star:.11g}")


if __name__ == "__main__":
    main(*sys.argv[1:])
