"""Command-line entry point: heightcensus <subcommand> ..."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import census, chartforms, clemens, oracle
from .heights import TriangleTriple
from .weights import omega_constraints, polygon_area, weight

EXIT_OK, EXIT_USAGE, EXIT_CHECK = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")
    return value


def _add_example(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--example", choices=census.EXAMPLES, required=required)
    p.add_argument("--n", type=int, default=None, help="ex2 dimension parameter")
    p.add_argument("--lam1", "--lambda1", dest="lam1", type=int, default=None)
    p.add_argument("--lam2", "--lambda2", dest="lam2", type=int, default=None)
    p.add_argument("--k1", "--kappa1", dest="k1", type=int, default=None)
    p.add_argument("--k2", "--kappa2", dest="k2", type=int, default=None)
    p.add_argument("--eta", type=float, default=None, help="ex3 weight parameter")
    p.add_argument("--instance", choices=sorted(census.INSTANCES), default=None, help="ex1 quadric pair")


def _spec(args) -> census.CountSpec:
    kw = {k: getattr(args, k) for k in ("n", "lam1", "lam2", "k1", "k2", "eta", "instance")
          if getattr(args, k, None) is not None}
    return census.CountSpec(args.example, **kw)


def _print_json(obj) -> None:
    print(json.dumps(obj, indent=2, ensure_ascii=False))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="heightcensus", description="Integral points of bounded height: counts, "
                     "predicted growth laws, fits and chart pole orders.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("predict", help="growth law from divisor data")
    _add_example(p, required=False)
    p.add_argument("--model", help="JSON divisor model file instead of a preset")

    p = sub.add_parser("count", help="count points of height <= R")
    _add_example(p)
    p.add_argument("--R", type=_fraction, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--points", help="write every point found as JSON lines to this file")

    p = sub.add_parser("ladder", help="run an R-ladder and write a CSV")
    _add_example(p, required=False)
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--r-min", type=_fraction)
    p.add_argument("--r-max", type=_fraction)
    p.add_argument("--steps", type=int)
    p.add_argument("--radii", help="explicit comma-separated ladder")
    p.add_argument("--workers", type=int)
    p.add_argument("--oracle-box", type=int)
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--deterministic", action="store_true", help="write 0 in the seconds column")
    p.add_argument("--plot-data", help="also write a two-column data file and a plotting script next to it")

    p = sub.add_parser("fit", help="fit a ladder CSV against the predicted law")
    _add_example(p)
    p.add_argument("--csv", required=True)
    p.add_argument("--tolerance", type=float, default=0.15)
    p.add_argument("--floor", type=int, default=30)
    p.add_argument("--strict", action="store_true", help="exit 2 on an inconsistent verdict")
    p.add_argument("--report", help="also write the report JSON here")

    p = sub.add_parser("poles", help="pole orders of the gauge forms on the preset charts")
    p.add_argument("--example", choices=census.EXAMPLES)
    p.add_argument("--n", type=int, default=None, help="ex2 only; default runs n = 1..5")
    p.add_argument("--chain", help="JSON chart-chain file instead of a preset")
    p.add_argument("--locus", action="append", default=[],
                   help="with --chain: variable or variable=c to read an order along")

    p = sub.add_parser("weight", help="weight of a unimodular triple")
    p.add_argument("--triple", required=True, help='three vectors, e.g. "1,0,0;0,1,0;0,0,1"')
    p.add_argument("--eta", type=float, default=0.5)

    p = sub.add_parser("oracle", help="brute-force box scan (small R only)")
    _add_example(p)
    p.add_argument("--R", type=_fraction, required=True)
    p.add_argument("--box", type=int, default=None)
    return parser


# ---------------------------------------------------------------------------
# subcommands

def cmd_predict(args) -> int:
    if args.model:
        pred = clemens.predict(clemens.load_model(args.model))
    elif args.example:
        pred = _spec(args).prediction()
    else:
        raise UsageError("predict: give --example or --model")
    _print_json(pred.as_json())
    return EXIT_OK


def cmd_count(args) -> int:
    spec = _spec(args)
    if args.workers < 1:
        raise UsageError("count: --workers must be >= 1")
    if args.points:
        row = _count_with_points(spec, args.R, args.points)
    elif args.workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            row = census.count_at(spec, args.R, pool)
    else:
        row = census.count_at(spec, args.R)
    out = {"example": spec.example, "params": spec.params(), "R": census.format_R(row.R),
           "value": row.value if isinstance(row.value, int) else float(row.value),
           "points_scanned": row.points_scanned}
    if row.count is not None:
        out["count"] = row.count
    _print_json(out)
    return EXIT_OK


def _count_with_points(spec: census.CountSpec, R: Fraction, path: str) -> census.CensusRow:
    from . import enumerators as en
    with open(path, "w", encoding="utf-8") as fh:
        sink = en.jsonl_sink(fh)
        if spec.example == "ex1":
            t = en.enumerate_ex1(census.INSTANCES[spec.instance], R, sink)
        elif spec.example == "ex2":
            t = en.enumerate_ex2(spec.n, spec.lam1, spec.lam2, R, sink)
        else:
            t = en.enumerate_ex3(spec.k1, spec.k2, R, spec.eta, sink)
    if spec.example == "ex3":
        return census.CensusRow(R, t.weighted, t.scanned, 0.0, t.count)
    return census.CensusRow(R, t.count, t.scanned)


_LADDER_FLAGS = {"n": "n", "lam1": "lambda1", "lam2": "lambda2", "k1": "kappa1", "k2": "kappa2",
                 "eta": "eta", "instance": "instance", "r_min": "r_min", "r_max": "r_max",
                 "steps": "steps", "workers": "workers", "oracle_box": "oracle_box", "example": "example"}


def ladder_config(args) -> census.LadderConfig:
    values = census.parse_config_text(open(args.config, encoding="utf-8").read()) if args.config else {}
    for flag, key in _LADDER_FLAGS.items():
        v = getattr(args, flag, None)
        if v is not None:
            values[key] = v
    if args.radii:
        try:
            values["radii"] = tuple(Fraction(x) for x in args.radii.split(","))
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"ladder: --radii {args.radii!r} is not a comma-separated list of rationals")
    if "example" not in values:
        raise UsageError("ladder: --example is required (flag or config key)")
    return census.LadderConfig(**values)


def cmd_ladder(args) -> int:
    cfg = ladder_config(args)
    rows = census.run_ladder(cfg)
    census.write_csv(rows, args.out, deterministic=args.deterministic)
    if args.plot_data:
        with open(args.plot_data, "w", encoding="utf-8") as fh:
            fh.write(census.plot_data(rows))
        with open(args.plot_data + ".py", "w", encoding="utf-8") as fh:
            fh.write(census.plot_script(args.plot_data, cfg.count_spec().prediction()))
    sys.stdout.write(census.rows_to_csv(rows, deterministic=args.deterministic))
    return EXIT_OK


def cmd_fit(args) -> int:
    spec = _spec(args)
    rows = census.read_csv(args.csv)
    fit = census.fit_growth(rows, spec.prediction(), args.tolerance, args.floor)
    report = census.report_dict(spec, fit)
    _print_json(report)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, ensure_ascii=False)
    if args.strict and fit.verdict == "inconsistent":
        return EXIT_CHECK
    return EXIT_OK


def cmd_poles(args) -> int:
    if args.chain:
        return _poles_from_chain(args)
    if not args.example:
        raise UsageError("poles: give --example or --chain")
    ns = [args.n] if args.n is not None else ([1, 2, 3, 4, 5] if args.example == "ex2" else [3])
    total = matched = 0
    for n in ns:
        rows = chartforms.run_preset(args.example, n)
        for r in rows:
            tag = f"n={n} " if args.example == "ex2" else ""
            status = "match" if r.match else "MISMATCH"
            print(f"{tag}{r.divisor:12s} chart {r.chart:5s} computed {r.computed:3d} expected {r.expected:3d}  {status}")
            total += 1
            matched += r.match
    print(f"{matched}/{total} matches")
    return EXIT_OK if matched == total else EXIT_CHECK


def _poles_from_chain(args) -> int:
    form, chain = chartforms.load_chain_file(args.chain)
    result = chartforms.pullback(form, chain)
    print(f"form: {result}")
    for loc in args.locus:
        if "=" in loc:
            name, c = loc.split("=", 1)
            locus = (name.strip(), Fraction(c))
        else:
            locus = loc.strip()
        print(f"order along {loc}: {chartforms.order_along(result, locus)}")
    return EXIT_OK


def parse_triple(text: str) -> TriangleTriple:
    try:
        vecs = [tuple(int(x) for x in part.split(",")) for part in text.split(";")]
    except ValueError:
        raise UsageError(f"weight: --triple {text!r} must be three ';'-separated integer vectors")
    if len(vecs) != 3:
        raise UsageError(f"weight: --triple {text!r} must contain exactly three vectors")
    return TriangleTriple.from_columns(*vecs)


def cmd_weight(args) -> int:
    t = parse_triple(args.triple)
    area = polygon_area(omega_constraints(t, args.eta))
    _print_json({"triple": [list(v) for v in t.vectors], "eta": args.eta, "area": area,
                 "weight": weight(t, args.eta)})
    return EXIT_OK


def cmd_oracle(args) -> int:
    spec = _spec(args)
    if spec.example == "ex1":
        inst = census.INSTANCES[spec.instance]
        params = {"q1": inst.q1, "q2": inst.q2}
    elif spec.example == "ex2":
        params = {"n": spec.n, "lam1": spec.lam1, "lam2": spec.lam2}
    else:
        params = {"k1": spec.k1, "k2": spec.k2}
    count = oracle.oracle_scan(spec.example, params, args.R, args.box)
    _print_json({"example": spec.example, "params": spec.params(), "R": census.format_R(args.R), "count": count})
    return EXIT_OK


COMMANDS = {"predict": cmd_predict, "count": cmd_count, "ladder": cmd_ladder, "fit": cmd_fit,
            "poles": cmd_poles, "weight": cmd_weight, "oracle": cmd_oracle}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())
