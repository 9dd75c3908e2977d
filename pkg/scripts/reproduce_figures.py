"""Write every figure preset to CSV and print the features found in each series.

    python scripts/reproduce_figures.py --outdir figures/
"""

from __future__ import annotations

import argparse
import time
from pathlib import Path

from ptchain import analysis, presets
from ptchain.cli import write_csv


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--outdir", default="figures")
    parser.add_argument("--only", nargs="*", help="subset of figure ids")
    args = parser.parse_args()
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for name in args.only or presets.PRESETS:
        p = presets.get(name)
        t = time.perf_counter()
        series = analysis.sweep(p.template(), p.gammas, [p.phi], p.omega_grid())
        with open(outdir / f"{name}.csv", "w", newline="") as fh:
            write_csv(series, fh)
        print(f"{name}: N={p.n} phi={p.phi:.4f} delta={p.delta} ({time.perf_counter() - t:.2f}s)")
        for s in series:
            r = analysis.analyze(s)
            zeros = ", ".join(f"{w:+.6f}" for w, _ in r.antiresonances) or "-"
            peaks = ", ".join(f"{w:+.3f}" for w, _ in r.peaks) or "-"
            steps = ", ".join(f"{w:+.3f}{k[:2]}" for w, k in r.phase_features) or "-"
            print(f"  gamma={s.gamma:.1f}  zeros [{zeros}]  peaks [{peaks}]  phase [{steps}]")


if __name__ == "__main__":
    main()
