"""R-ladders, growth fits and their persistence."""
from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import enumerators as en
from .clemens import GrowthPrediction, predict_preset
from .heights import DEFAULT_INSTANCE, SPLIT_INSTANCE, QuadricPairInstance

Number = Union[int, Fraction]

INSTANCES: Dict[str, QuadricPairInstance] = {"default": DEFAULT_INSTANCE, "split": SPLIT_INSTANCE}
EXAMPLES = ("ex1", "ex2", "ex3")


@dataclass(frozen=True)
class CountSpec:
    """Which enumerator to run, with its parameters."""
    example: str
    n: int = 1
    lam1: int = 1
    lam2: int = 1
    k1: int = 1
    k2: int = 1
    eta: float = en.DEFAULT_ETA
    instance: str = "default"

    def __post_init__(self):
        if self.example not in EXAMPLES:
            raise ValueError(f"unknown example id {self.example!r} (expected ex1, ex2 or ex3)")
        if self.instance not in INSTANCES:
            raise ValueError(f"unknown instance {self.instance!r} (expected default or split)")
        # validate eagerly so workers never see bad parameters
        if self.example == "ex2":
            en.Ex2Params(self.n, self.lam1, self.lam2)
        elif self.example == "ex3":
            en.Ex3Params(self.k1, self.k2, self.eta)

    def params(self) -> dict:
        if self.example == "ex1":
            return {"instance": self.instance}
        if self.example == "ex2":
            return {"n": self.n, "lam1": self.lam1, "lam2": self.lam2}
        return {"k1": self.k1, "k2": self.k2, "eta": self.eta}

    def prediction_params(self) -> dict:
        if self.example == "ex2":
            return {"n": self.n, "lam1": self.lam1, "lam2": self.lam2}
        if self.example == "ex3":
            return {"k1": self.k1, "k2": self.k2}
        return {}

    def prediction(self) -> GrowthPrediction:
        return predict_preset(self.example, **self.prediction_params())

    def keys(self, R) -> List[int]:
        if self.example == "ex1":
            return en.ex1_partition_keys(INSTANCES[self.instance], R)
        if self.example == "ex2":
            return en.ex2_partition_keys(en.Ex2Params(self.n, self.lam1, self.lam2), R)
        return en.ex3_partition_keys(en.Ex3Params(self.k1, self.k2, self.eta), R)

    def run(self, R, key: int) -> en.Tally:
        if self.example == "ex1":
            return en.ex1_run_partition(INSTANCES[self.instance], R, key)
        if self.example == "ex2":
            return en.ex2_run_partition(en.Ex2Params(self.n, self.lam1, self.lam2), R, key)
        return en.ex3_run_partition(en.Ex3Params(self.k1, self.k2, self.eta), R, key)


def _task(spec: CountSpec, R: Fraction, key: int) -> en.Tally:
    return spec.run(R, key)


@dataclass
class CensusRow:
    R: Fraction
    value: Number
    points_scanned: int
    seconds: float = 0.0
    count: Optional[int] = None  # raw point count where it differs from value (ex3)


def count_at(spec: CountSpec, R, pool: Optional[ProcessPoolExecutor] = None) -> CensusRow:
    """One ladder value; partitions are merged in key order, so the result
    does not depend on how they were scheduled."""
    R = Fraction(R)
    start = time.perf_counter()
    keys = spec.keys(R)
    if pool is None:
        parts = [spec.run(R, k) for k in keys]
    else:
        futures = [pool.submit(_task, spec, R, k) for k in keys]
        parts = [f.result() for f in futures]
    total = en.Tally()
    for p in parts:
        total = total + p
    seconds = time.perf_counter() - start
    if spec.example == "ex3":
        return CensusRow(R, total.weighted, total.scanned, seconds, total.count)
    return CensusRow(R, total.count, total.scanned, seconds)


# ---------------------------------------------------------------------------
# ladder configuration

@dataclass
class LadderConfig:
    example: str = "ex2"
    n: int = 1
    lambda1: int = 1
    lambda2: int = 1
    kappa1: int = 1
    kappa2: int = 1
    eta: float = en.DEFAULT_ETA
    instance: str = "default"
    r_min: Fraction = Fraction(1)
    r_max: Fraction = Fraction(100)
    steps: int = 8
    spacing: str = "geometric"
    workers: int = 1
    tolerance: float = 0.15
    floor: int = 30
    oracle_box: Optional[int] = None
    radii: Optional[Tuple[Fraction, ...]] = None  # explicit ladder overrides r_min/r_max/steps

    def __post_init__(self):
        self.r_min = Fraction(self.r_min)
        self.r_max = Fraction(self.r_max)
        if self.spacing != "geometric":
            raise ValueError(f"unsupported spacing {self.spacing!r} (only geometric)")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.radii is not None:
            radii = tuple(Fraction(r) for r in self.radii)
            if not radii or any(r < 0 for r in radii) or any(a >= b for a, b in zip(radii, radii[1:])):
                raise ValueError("explicit radii must be nonnegative and strictly increasing")
            self.radii = radii
        else:
            if self.r_min < 1:
                raise ValueError("r_min must be >= 1")
            if self.r_max <= self.r_min:
                raise ValueError("r_max must exceed r_min")
            if self.steps < 4:
                raise ValueError("steps must be >= 4")
        self.count_spec()

    def count_spec(self) -> CountSpec:
        return CountSpec(self.example, self.n, self.lambda1, self.lambda2,
                         self.kappa1, self.kappa2, self.eta, self.instance)

    def ladder(self) -> List[Fraction]:
        if self.radii is not None:
            return list(self.radii)
        ratio = float(self.r_max / self.r_min)
        out = [self.r_min]
        for k in range(1, self.steps - 1):
            x = float(self.r_min) * ratio ** (k / (self.steps - 1))
            # three decimals keeps the values exact and printable
            out.append(Fraction(round(x * 1000), 1000))
        out.append(self.r_max)
        return out


CONFIG_KEYS = {f.name for f in fields(LadderConfig)} - {"radii"}
_INT_KEYS = {"n", "lambda1", "lambda2", "kappa1", "kappa2", "steps", "workers", "floor", "oracle_box"}
_FLOAT_KEYS = {"eta", "tolerance"}
_FRACTION_KEYS = {"r_min", "r_max"}


def coerce_config_value(key: str, raw: str):
    if key not in CONFIG_KEYS:
        raise ValueError(f"unknown config key {key!r}")
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _FRACTION_KEYS:
            return Fraction(raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"config key {key!r}: bad value {raw!r}") from exc
    return raw.strip()


def parse_config_text(text: str) -> Dict[str, object]:
    """Flat `key = value` lines; '#' starts a comment."""
    out: Dict[str, object] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value'")
        key, raw = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        out[key] = coerce_config_value(key, raw)
    return out


def load_config(path, overrides: Optional[Dict[str, object]] = None) -> LadderConfig:
    with open(path, encoding="utf-8") as fh:
        values = parse_config_text(fh.read())
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return LadderConfig(**values)


# ---------------------------------------------------------------------------
# running

def run_ladder(cfg: LadderConfig) -> List[CensusRow]:
    spec = cfg.count_spec()
    radii = cfg.ladder()
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            rows = [count_at(spec, R, pool) for R in radii]
    else:
        rows = [count_at(spec, R) for R in radii]
    if cfg.oracle_box is not None:
        cross_check(spec, rows, cfg.oracle_box)
    return rows


def cross_check(spec: CountSpec, rows: Sequence[CensusRow], box: int) -> int:
    """Compare every row the oracle can reach inside `box`; returns how many were checked."""
    from . import oracle
    params = {"ex1": {"q1": INSTANCES[spec.instance].q1, "q2": INSTANCES[spec.instance].q2},
              "ex2": {"n": spec.n, "lam1": spec.lam1, "lam2": spec.lam2},
              "ex3": {"k1": spec.k1, "k2": spec.k2}}[spec.example]
    checked = 0
    for row in rows:
        if oracle.required_box(spec.example, params, row.R) > box:
            continue
        expected = oracle.oracle_scan(spec.example, params, row.R)
        got = row.count if row.count is not None else row.value
        if got != expected:
            raise AssertionError(f"{spec.example} at R={row.R}: enumerator {got} != oracle {expected}")
        checked += 1
    return checked


# ---------------------------------------------------------------------------
# fitting

@dataclass
class FitReport:
    a_hat: float
    c_hat: float
    rss_with_log: float
    rss_without_log: float
    preferred_model: str
    prediction: GrowthPrediction
    verdict: str
    rows_used: int = 0
    notes: Tuple[str, ...] = field(default=())


def _lstsq(X: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, float]:
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ coef
    return coef, float(resid @ resid)


def fit_growth(rows: Sequence[CensusRow], prediction: GrowthPrediction,
               tolerance: float = 0.15, floor: int = 30) -> FitReport:
    """Fit log value ~ c + a log R, with and without a fixed (b-1) log log R term."""
    nan = float("nan")

    def inconclusive(why: str) -> FitReport:
        return FitReport(nan, nan, nan, nan, "no-log", prediction, "inconclusive", 0, (why,))

    positive = [r for r in rows if r.value >= 1]
    if len(positive) < 4:
        return inconclusive("fewer than 4 rows with value >= 1")
    ordered = sorted(rows, key=lambda r: r.R)
    top = ordered[len(ordered) // 2:]
    usable = [r for r in top if r.value >= floor and r.R > 1]
    if len(usable) < 3:
        return inconclusive(f"fewer than 3 rows in the top half of the ladder with value >= {floor}")
    logR = np.array([math.log(r.R) for r in usable])
    logV = np.array([math.log(r.value) for r in usable])
    if np.ptp(logR) == 0 or np.ptp(logV) == 0:
        return inconclusive("no variation in the fitted rows")
    X = np.column_stack([np.ones_like(logR), logR])
    coef_plain, rss_plain = _lstsq(X, logV)
    shift = (prediction.b - 1) * np.log(logR)
    coef_log, rss_log = _lstsq(X, logV - shift)
    rss_plain, rss_log = max(rss_plain, 0.0), max(rss_log, 0.0)
    a_hat = float(coef_log[1])
    preferred = "log" if rss_log < rss_plain else "no-log"
    ok = abs(a_hat - float(prediction.a)) <= tolerance
    return FitReport(a_hat, float(math.exp(coef_log[0])), rss_log, rss_plain, preferred, prediction,
                     "consistent" if ok else "inconsistent", len(usable))


def report_dict(spec: CountSpec, fit: FitReport) -> dict:
    p = fit.prediction
    return {
        "example": spec.example,
        "params": spec.params(),
        "prediction": {"a": str(p.a), "b": p.b, "focusing": p.focusing},
        "fit": {"a_hat": _json_float(fit.a_hat), "c_hat": _json_float(fit.c_hat),
                "rss_log": _json_float(fit.rss_with_log), "rss_nolog": _json_float(fit.rss_without_log),
                "preferred": fit.preferred_model, "rows_used": fit.rows_used},
        "verdict": fit.verdict,
        "notes": list(p.notes) + list(fit.notes),
    }


def _json_float(x: float):
    return None if math.isnan(x) else x


# ---------------------------------------------------------------------------
# CSV and plot files

CSV_HEADER = ("R", "value", "points_scanned", "seconds")


def format_R(R: Fraction) -> str:
    if R.denominator == 1:
        return str(R.numerator)
    d = R.denominator
    # exact decimal when the denominator only has factors 2 and 5
    while d % 2 == 0:
        d //= 2
    while d % 5 == 0:
        d //= 5
    if d == 1:
        digits = 0
        scaled = R
        while scaled.denominator != 1:
            scaled *= 10
            digits += 1
        s = str(abs(scaled.numerator)).rjust(digits + 1, "0")
        sign = "-" if R < 0 else ""
        return f"{sign}{s[:-digits]}.{s[-digits:]}"
    return f"{R.numerator}/{R.denominator}"


def format_value(value: Number) -> str:
    if isinstance(value, int):
        return str(value)
    return format(float(value), ".15g")


def rows_to_csv(rows: Iterable[CensusRow], deterministic: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        secs = "0" if deterministic else f"{r.seconds:.3f}"
        w.writerow((format_R(r.R), format_value(r.value), r.points_scanned, secs))
    return buf.getvalue()


def write_csv(rows: Iterable[CensusRow], path, deterministic: bool = False) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(rows_to_csv(rows, deterministic))


def parse_value(text: str) -> Number:
    try:
        return int(text)
    except ValueError:
        return Fraction(text)


def csv_to_rows(text: str) -> List[CensusRow]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header) != CSV_HEADER:
        raise ValueError(f"CSV header must be {','.join(CSV_HEADER)}")
    rows = []
    for lineno, rec in enumerate(reader, start=2):
        if not rec:
            continue
        if len(rec) != 4:
            raise ValueError(f"CSV line {lineno}: expected 4 fields")
        try:
            rows.append(CensusRow(Fraction(rec[0]), parse_value(rec[1]), int(rec[2]), float(rec[3])))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"CSV line {lineno}: {exc}") from exc
    return rows


def read_csv(path) -> List[CensusRow]:
    with open(path, encoding="utf-8") as fh:
        return csv_to_rows(fh.read())


def plot_data(rows: Iterable[CensusRow]) -> str:
    return "".join(f"{float(r.R)!r} {float(r.value)!r}\n" for r in rows)


def plot_script(data_path: str, prediction: Optional[GrowthPrediction] = None) -> str:
    """Standalone matplotlib script text for the two-column data file."""
    guide = ""
    if prediction is not None:
        a, b = float(prediction.a), prediction.b
        guide = (
            f"ref = R ** {a!r} * np.log(np.maximum(R, 1.0001)) ** {b - 1}\n"
            "ref *= V[-1] / ref[-1]\n"
            f"ax.loglog(R, ref, '--', label='predicted shape ({prediction.law})')\n"
        )
    return (
        "import numpy as np\n"
        "import matplotlib.pyplot as plt\n"
        f"R, V = np.loadtxt({data_path!r}, unpack=True)\n"
        "fig, ax = plt.subplots()\n"
        "ax.loglog(R, V, 'o-', label='count')\n"
        f"{guide}"
        "ax.set_xlabel('R')\n"
        "ax.set_ylabel('N(R)')\n"
        "ax.legend()\n"
        "plt.show()\n"
    )


def config_dict(cfg: LadderConfig) -> dict:
    d = asdict(cfg)
    for k, v in d.items():
        if isinstance(v, Fraction):
            d[k] = format_R(v)
    if d["radii"] is not None:
        d["radii"] = [format_R(r) for r in cfg.radii]
    return d


__all__ = [
    "CountSpec", "CensusRow", "LadderConfig", "FitReport", "count_at", "run_ladder",
    "fit_growth", "report_dict", "rows_to_csv", "csv_to_rows", "write_csv", "read_csv",
    "parse_config_text", "load_config", "plot_data", "plot_script", "cross_check",
]
