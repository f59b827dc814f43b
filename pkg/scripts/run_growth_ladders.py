"""Run the standard growth ladders, write one CSV and one fit report per ladder.

    python3 scripts/run_growth_ladders.py --out results/ [--only ex2-112] [--workers 4]
"""
from __future__ import annotations

import argparse
import json
import time
from pathlib import Path

from heightcensus import census
from heightcensus.census import LadderConfig

LADDERS = {
    "ex2-112": (dict(example="ex2", n=2, lambda1=1, lambda2=2, r_min=100, r_max=2000, steps=10), 0.15),
    "ex2-111": (dict(example="ex2", n=2, lambda1=1, lambda2=1, r_min=100, r_max=2000, steps=10), 0.2),
    "ex1": (dict(example="ex1", r_min=10, r_max=120, steps=10), 0.3),
    "ex3-11": (dict(example="ex3", r_min=2, r_max=40, steps=8), 0.15),
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", default="results")
    ap.add_argument("--only", action="append", choices=sorted(LADDERS))
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name in args.only or list(LADDERS):
        kw, tol = LADDERS[name]
        cfg = LadderConfig(**kw, workers=args.workers, tolerance=tol)
        t0 = time.perf_counter()
        rows = census.run_ladder(cfg)
        census.write_csv(rows, out / f"{name}.csv")
        spec = cfg.count_spec()
        fit = census.fit_growth(rows, spec.prediction(), tolerance=tol)
        report = census.report_dict(spec, fit)
        (out / f"{name}.json").write_text(json.dumps(report, indent=2, ensure_ascii=False))
        (out / f"{name}.dat").write_text(census.plot_data(rows))
        (out / f"{name}.plot.py").write_text(census.plot_script(f"{name}.dat", spec.prediction()))
        print(f"{name:8s} a_hat={fit.a_hat:.4f} predicted a={spec.prediction().a} "
              f"preferred={fit.preferred_model} verdict={fit.verdict} ({time.perf_counter() - t0:.0f} s)")


if __name__ == "__main__":
    main()
