"""Growth-law predictor from boundary divisor data.

Given components with orders d and height weights lambda, and the set of
index subsets with nonempty common intersection, the number of points of
height <= R is expected to grow like c R^a (log R)^(b-1).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

Focus = Union[bool, str]


@dataclass(frozen=True)
class Component:
    name: str
    d: int
    lam: Fraction


def downward_closure(faces: Iterable[Iterable[int]]) -> FrozenSet[FrozenSet[int]]:
    out = set()
    for f in faces:
        f = tuple(sorted(set(f)))
        for k in range(1, len(f) + 1):
            out.update(frozenset(s) for s in combinations(f, k))
    return frozenset(out)


@dataclass(frozen=True)
class DivisorModel:
    """Components are 1-indexed in `faces` and `b_set`."""
    components: Tuple[Component, ...]
    faces: FrozenSet[FrozenSet[int]]
    b_set: FrozenSet[int] = frozenset()

    def __post_init__(self):
        comps = tuple(self.components)
        n = len(comps)
        if n == 0:
            raise ValueError("model needs at least one component")
        for c in comps:
            if c.lam < 0:
                raise ValueError(f"component {c.name}: lambda must be nonnegative")
        faces = frozenset(frozenset(f) for f in self.faces)
        for f in faces:
            if not f or not f <= set(range(1, n + 1)):
                raise ValueError(f"face {sorted(f)} uses indices outside 1..{n}")
            for i in f:
                if f - {i} and f - {i} not in faces:
                    raise ValueError(f"faces not downward closed: {sorted(f)} present, {sorted(f - {i})} missing")
        for i in range(1, n + 1):
            if frozenset({i}) not in faces:
                raise ValueError(f"singleton face {{{i}}} missing")
        b_set = frozenset(self.b_set)
        if not b_set <= set(range(1, n + 1)):
            raise ValueError("b_set uses indices outside the component range")
        big = [c for c in comps if c.d > 1]
        if big and not any(c.lam > 0 for c in big):
            raise ValueError("some component with d > 1 must carry positive lambda")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "faces", faces)
        object.__setattr__(self, "b_set", b_set)

    @classmethod
    def build(cls, names, d, lam, maximal_faces, b_set=()) -> "DivisorModel":
        comps = tuple(Component(str(nm), int(di), Fraction(li)) for nm, di, li in zip(names, d, lam))
        singles = [[i] for i in range(1, len(comps) + 1)]
        return cls(comps, downward_closure(list(maximal_faces) + singles), frozenset(b_set))

    def ratios(self) -> List[Optional[Fraction]]:
        """(d - 1)/lambda per component; None where lambda = 0."""
        return [Fraction(c.d - 1) / c.lam if c.lam > 0 else None for c in self.components]

    def rescaled(self, s) -> "DivisorModel":
        s = Fraction(s)
        comps = tuple(Component(c.name, c.d, c.lam * s) for c in self.components)
        return DivisorModel(comps, self.faces, self.b_set)


@dataclass(frozen=True)
class GrowthPrediction:
    a: Fraction
    b: int
    attaining: FrozenSet[int]
    focusing: Focus
    law: str
    notes: Tuple[str, ...] = field(default=())

    def as_json(self) -> dict:
        return {
            "a": str(self.a),
            "b": self.b,
            "attaining": sorted(self.attaining),
            "focusing": self.focusing,
            "law": self.law,
            "notes": list(self.notes),
        }


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"({q.numerator}/{q.denominator})"


def render_law(a: Fraction, b: int) -> str:
    if a == 0:
        return "c·(log R)" if b == 1 else f"c·(log R)^{b}"
    tail = "" if b == 1 else ("·log R" if b == 2 else f"·(log R)^{b - 1}")
    return f"c·R^{_fmt(a)}{tail}"


def predict(m: DivisorModel, notes: Sequence[str] = ()) -> GrowthPrediction:
    ratios = m.ratios()
    present = [r for r in ratios if r is not None]
    if not present:
        raise ValueError("height not proper on boundary")
    a = max(present)
    attaining = frozenset(i + 1 for i, r in enumerate(ratios) if r == a)
    inside = [f for f in m.faces if f <= attaining]
    b = max(len(f) for f in inside)
    if not m.b_set:
        focusing: Focus = "n/a"
    else:
        top = [f for f in inside if len(f) == b]
        focusing = not any(f & m.b_set for f in top)
    return GrowthPrediction(a, b, attaining, focusing, render_law(a, b), tuple(notes))


# ---------------------------------------------------------------------------
# presets

EX1_NAMES = ("E1", "D210", "E3^2", "(E2^2)+", "E3^1", "(E2^1)+", "E3^0", "D022")
EX1_D = (2, 1, 3, 5, 3, 7, 5, 3)
EX1_LAMBDA = (1, 1, 2, 3, 1, 3, 2, 1)

EX3_NAMES = ("E", "D12,3", "D13,2", "D23,1", "(D^2_123)+")
EX3_D = (9, 6, 6, 6, 9)

EX3_THRESHOLD_NOTE = (
    "focusing on the isolated components 2..4 needs 5/min(lambda_2..4) > "
    "max(8/lambda_1, 8/lambda_5) under the (d-1)/lambda rule, i.e. "
    "min(lambda_1, lambda_5) > (8/5) min(lambda_2..4); a threshold of 4/3 "
    "does not follow from these orders"
)


def ex1_model() -> DivisorModel:
    faces = [[i, i + 1] for i in range(2, 8)]
    faces += [[1, i] for i in range(2, 9)]
    faces += [[1, i, i + 1] for i in range(2, 8)]
    return DivisorModel.build(EX1_NAMES, EX1_D, EX1_LAMBDA, faces)


def ex2_model(n: int, lam1, lam2) -> DivisorModel:
    if n < 1:
        raise ValueError("n must be >= 1")
    if Fraction(lam1) <= 0 or Fraction(lam2) <= 0:
        raise ValueError("lambdas must be positive")
    return DivisorModel.build(("D1", "D2"), (n + 1, n + 1), (lam1, lam2), [[1, 2]])


def ex3_model(k1, k2) -> DivisorModel:
    k1, k2 = Fraction(k1), Fraction(k2)
    if k1 <= 0 or k2 <= 0:
        raise ValueError("kappas must be positive")
    lam = (3 * k1, k1 + k2, k1 + k2, k1 + k2, 3 * k2)
    return ex3_general(lam)


def ex3_general(lam: Sequence) -> DivisorModel:
    """Example III boundary with arbitrary weights."""
    faces = [[i, 1, 5] for i in (2, 3, 4)]
    return DivisorModel.build(EX3_NAMES, EX3_D, lam, faces, b_set=(1, 5))


def preset(example: str, **params) -> DivisorModel:
    ex = example.lower()
    if ex == "ex1":
        return ex1_model()
    if ex == "ex2":
        return ex2_model(int(params.get("n", 1)), params.get("lam1", 1), params.get("lam2", 1))
    if ex == "ex3":
        return ex3_model(params.get("k1", 1), params.get("k2", 1))
    raise ValueError(f"unknown example id {example!r} (expected ex1, ex2 or ex3)")


def preset_notes(example: str) -> Tuple[str, ...]:
    return (EX3_THRESHOLD_NOTE,) if example.lower() == "ex3" else ()


def predict_preset(example: str, **params) -> GrowthPrediction:
    return predict(preset(example, **params), preset_notes(example))


# ---------------------------------------------------------------------------
# JSON models

def model_from_dict(data: dict) -> DivisorModel:
    if not isinstance(data, dict):
        raise ValueError("divisor model must be a JSON object")
    unknown = set(data) - {"components", "faces", "b_set"}
    if unknown:
        raise ValueError(f"unknown keys in divisor model: {sorted(unknown)}")
    comps = data.get("components")
    if not isinstance(comps, list) or not comps:
        raise ValueError("'components' must be a nonempty list")
    names, ds, lams = [], [], []
    for k, c in enumerate(comps, start=1):
        if not isinstance(c, dict) or set(c) != {"name", "d", "lambda"}:
            raise ValueError(f"component {k} must have exactly the keys name, d, lambda")
        if not isinstance(c["name"], str):
            raise ValueError(f"component {k}: name must be a string")
        if not isinstance(c["d"], int) or isinstance(c["d"], bool):
            raise ValueError(f"component {k}: d must be an integer")
        try:
            lam = Fraction(str(c["lambda"]))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"component {k}: lambda {c['lambda']!r} is not a rational 'p/q'") from exc
        names.append(c["name"])
        ds.append(c["d"])
        lams.append(lam)
    faces = data.get("faces", [])
    if not isinstance(faces, list) or not all(
            isinstance(f, list) and f and all(isinstance(i, int) for i in f) for f in faces):
        raise ValueError("'faces' must be a list of nonempty integer lists")
    b_set = data.get("b_set", [])
    if not isinstance(b_set, list) or not all(isinstance(i, int) for i in b_set):
        raise ValueError("'b_set' must be a list of integers")
    n = len(names)
    for f in faces:
        bad = [i for i in f if not 1 <= i <= n]
        if bad:
            raise ValueError(f"face {f} refers to unknown components {bad} (valid 1..{n})")
    return DivisorModel.build(names, ds, lams, faces, b_set)


def load_model(path) -> DivisorModel:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    try:
        return model_from_dict(data)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from exc


def model_to_dict(m: DivisorModel) -> Dict:
    maximal = [f for f in m.faces if not any(f < g for g in m.faces)]
    return {
        "components": [{"name": c.name, "d": c.d, "lambda": f"{c.lam.numerator}/{c.lam.denominator}"}
                       for c in m.components],
        "faces": sorted(sorted(f) for f in maximal),
        "b_set": sorted(m.b_set),
    }
