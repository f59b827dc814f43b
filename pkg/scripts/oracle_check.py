"""Compare the fast enumerators against the box-scan oracle on a grid of radii.

    python3 scripts/oracle_check.py --example ex2 --n 2 --lam1 1 --lam2 2 --r-max 20
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from heightcensus import oracle
from heightcensus.census import CountSpec, count_at


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--example", choices=("ex1", "ex2", "ex3"), required=True)
    ap.add_argument("--n", type=int, default=1)
    ap.add_argument("--lam1", type=int, default=1)
    ap.add_argument("--lam2", type=int, default=1)
    ap.add_argument("--k1", type=int, default=1)
    ap.add_argument("--k2", type=int, default=1)
    ap.add_argument("--r-max", type=int, default=8)
    ap.add_argument("--half-steps", action="store_true", help="also check R = k/2")
    args = ap.parse_args()

    spec = CountSpec(args.example, n=args.n, lam1=args.lam1, lam2=args.lam2, k1=args.k1, k2=args.k2)
    if args.example == "ex1":
        from heightcensus.census import INSTANCES
        inst = INSTANCES[spec.instance]
        params = {"q1": inst.q1, "q2": inst.q2}
    elif args.example == "ex2":
        params = {"n": args.n, "lam1": args.lam1, "lam2": args.lam2}
    else:
        params = {"k1": args.k1, "k2": args.k2}
    step = 2 if args.half_steps else 1
    radii = [Fraction(k, step) for k in range(step, step * args.r_max + 1)]
    heights = oracle.oracle_heights(args.example, params, args.r_max)
    want = oracle.count_table(heights, radii)
    bad = 0
    for R, w in zip(radii, want):
        row = count_at(spec, R)
        got = row.count if row.count is not None else row.value
        flag = "" if got == w else "  MISMATCH"
        bad += got != w
        print(f"R={str(R):>6s} enumerator={got:>8d} oracle={w:>8d}{flag}")
    print(f"{len(radii) - bad}/{len(radii)} agree")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
