"""Print pole orders of the invariant forms on every preset chart, with chart forms.

    python3 scripts/pole_table.py [--n-max 5]
"""
from __future__ import annotations

import argparse

from heightcensus import chartforms


def describe(form: chartforms.TopForm) -> str:
    if form.factors is None:
        return str(form.coeff)
    parts = [f"({f})^{e}" for f, e in form.factors if not f.same_as(chartforms.RatFn(chartforms.SparsePoly.const(1)))]
    return " * ".join(parts)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n-max", type=int, default=5)
    args = ap.parse_args()
    jobs = [("ex1", 3), ("ex3", 3)] + [("ex2", n) for n in range(1, args.n_max + 1)]
    for example, n in jobs:
        tag = f"{example} n={n}" if example == "ex2" else example
        print(f"== {tag}")
        for chart, form in chartforms.chart_forms(example, n).items():
            print(f"   {chart:6s} {describe(form)}")
        for r in chartforms.run_preset(example, n):
            mark = "ok" if r.match else "MISMATCH"
            print(f"   {r.divisor:12s} {r.chart:6s} computed {r.computed:3d} expected {r.expected:3d} {mark}")


if __name__ == "__main__":
    main()
