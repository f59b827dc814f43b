"""Exact sparse polynomial / rational-function calculus for top forms on charts.

Coefficients are Fractions. Rational functions cancel only pure powers of
variables; the order of vanishing along a coordinate hyperplane is exact
under that reduction because ord_x is additive over products.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

Exps = Tuple[int, ...]


class InexactDivision(ArithmeticError):
    def __init__(self, quotient: "SparsePoly", remainder: "SparsePoly"):
        super().__init__(f"inexact division, remainder {remainder}")
        self.quotient = quotient
        self.remainder = remainder


# ---------------------------------------------------------------------------
# polynomials

class SparsePoly:
    """Polynomial as {exponent tuple: coefficient} over an ordered variable list."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str] = (), terms: Optional[Mapping[Exps, Fraction]] = None):
        self.variables = tuple(variables)
        clean: Dict[Exps, Fraction] = {}
        k = len(self.variables)
        for e, c in (terms or {}).items():
            if len(e) != k:
                raise ValueError("exponent vector does not match variable list")
            if any(x < 0 for x in e):
                raise ValueError("negative exponent in polynomial")
            c = Fraction(c)
            if c:
                clean[tuple(e)] = c
        self.terms = clean

    # construction
    @classmethod
    def const(cls, c) -> "SparsePoly":
        return cls((), {(): Fraction(c)})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "SparsePoly":
        return cls((name,), {(power,): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    # variable bookkeeping
    def over(self, variables: Sequence[str]) -> "SparsePoly":
        """Same polynomial written over a superset of variables."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        pos = {v: i for i, v in enumerate(variables)}
        missing = [v for v in self.variables if v not in pos]
        if missing:
            for (e, c) in self.terms.items():
                for v, x in zip(self.variables, e):
                    if v in missing and x:
                        raise ValueError(f"variable {v} not in target list")
        idx = [pos.get(v) for v in self.variables]
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(variables)
            for i, x in zip(idx, e):
                if i is not None:
                    ne[i] = x
            out[tuple(ne)] = c
        return SparsePoly(variables, out)

    def support(self) -> Tuple[str, ...]:
        """Variables that actually occur."""
        return tuple(v for i, v in enumerate(self.variables) if any(e[i] for e in self.terms))

    def trimmed(self) -> "SparsePoly":
        return self.over(self.support())

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePoly):
            other = SparsePoly.const(other)
        u = _union(self.variables, other.variables)
        return self.over(u).terms == other.over(u).terms

    def __hash__(self):
        t = self.trimmed()
        order = sorted(range(len(t.variables)), key=lambda i: t.variables[i])
        return hash(frozenset((tuple((t.variables[i], e[i]) for i in order if e[i]), c)
                              for e, c in t.terms.items()))

    # ring operations
    def __add__(self, other) -> "SparsePoly":
        other = _as_poly(other)
        u = _union(self.variables, other.variables)
        a, b = self.over(u), other.over(u)
        out = dict(a.terms)
        for e, c in b.terms.items():
            out[e] = out.get(e, 0) + c
        return SparsePoly(u, out)

    __radd__ = __add__

    def __neg__(self) -> "SparsePoly":
        return SparsePoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "SparsePoly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "SparsePoly":
        return _as_poly(other) - self

    def __mul__(self, other) -> "SparsePoly":
        other = _as_poly(other)
        u = _union(self.variables, other.variables)
        a, b = self.over(u), other.over(u)
        out: Dict[Exps, Fraction] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return SparsePoly(u, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "SparsePoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = SparsePoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def derivative(self, name: str) -> "SparsePoly":
        if name not in self.variables:
            return SparsePoly(self.variables, {})
        i = self.variables.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return SparsePoly(self.variables, out)

    def order(self, name: str) -> int:
        """Largest k with name^k dividing self (min exponent); zero poly has no order."""
        if not self.terms:
            raise ValueError("order of the zero polynomial is undefined")
        if name not in self.variables:
            return 0
        i = self.variables.index(name)
        return min(e[i] for e in self.terms)

    def min_exponents(self) -> Exps:
        return tuple(min(e[i] for e in self.terms) for i in range(len(self.variables)))

    def shift_down(self, exps: Exps) -> "SparsePoly":
        """Divide by the monomial with exponent vector `exps`."""
        return SparsePoly(self.variables,
                          {tuple(x - y for x, y in zip(e, exps)): c for e, c in self.terms.items()})

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def evaluate(self, point: Mapping[str, Fraction]) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for v, x in zip(self.variables, e):
                if x:
                    term *= Fraction(point[v]) ** x
            total += term
        return total

    def degree_in(self, name: str) -> int:
        if name not in self.variables or not self.terms:
            return 0
        i = self.variables.index(name)
        return max(e[i] for e in self.terms)

    def __repr__(self) -> str:
        return format_poly(self)


def _as_poly(x) -> SparsePoly:
    return x if isinstance(x, SparsePoly) else SparsePoly.const(x)


def _union(a: Sequence[str], b: Sequence[str]) -> Tuple[str, ...]:
    if tuple(a) == tuple(b):
        return tuple(a)
    seen = list(a)
    seen.extend(v for v in b if v not in a)
    return tuple(seen)


def _lead(p: SparsePoly) -> Tuple[Exps, Fraction]:
    # lexicographic leading term over the poly's own variable order
    e = max(p.terms)
    return e, p.terms[e]


def exact_divide(p: SparsePoly, q: SparsePoly) -> SparsePoly:
    """p / q in the polynomial ring; raises InexactDivision carrying the remainder."""
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    u = _union(p.variables, q.variables)
    p, q = p.over(u), q.over(u)
    qe, qc = _lead(q)
    rem = p
    quot = SparsePoly(u, {})
    while not rem.is_zero():
        re_, rc = _lead(rem)
        if any(x < y for x, y in zip(re_, qe)):
            raise InexactDivision(quot, rem)
        t = SparsePoly(u, {tuple(x - y for x, y in zip(re_, qe)): rc / qc})
        quot = quot + t
        rem = rem - t * q
    return quot


def add(p: SparsePoly, q: SparsePoly) -> SparsePoly:
    return p + q


def mul(p: SparsePoly, q: SparsePoly) -> SparsePoly:
    return p * q


def partial_derivative(p: SparsePoly, name: str) -> SparsePoly:
    return p.derivative(name)


def format_poly(p: SparsePoly) -> str:
    if not p.terms:
        return "0"
    parts = []
    for e in sorted(p.terms, reverse=True):
        c = p.terms[e]
        mono = "*".join(v if x == 1 else f"{v}^{x}" for v, x in zip(p.variables, e) if x)
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# rational functions

class RatFn:
    """num/den with common pure variable powers cancelled."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _as_poly(num)
        den = SparsePoly.const(1) if den is None else _as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        u = _union(num.variables, den.variables)
        num, den = num.over(u), den.over(u)
        if num.is_zero():
            num, den = SparsePoly(u, {}), SparsePoly.const(1).over(u)
        else:
            common = tuple(min(a, b) for a, b in zip(num.min_exponents(), den.min_exponents()))
            if any(common):
                num, den = num.shift_down(common), den.shift_down(common)
            # normalize a monomial denominator to coefficient 1
            if den.is_monomial():
                (e, c), = den.terms.items()
                if c != 1:
                    num = SparsePoly(u, {k: v / c for k, v in num.terms.items()})
                    den = SparsePoly(u, {e: Fraction(1)})
        self.num = num
        self.den = den

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.num.variables

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other) -> "RatFn":
        other = _as_ratfn(other)
        if self.den == other.den:
            return RatFn(self.num + other.num, self.den)
        if self.den.is_monomial() and other.den.is_monomial():
            u = _union(self.variables, other.variables)
            (e1, _), = self.den.over(u).terms.items()
            (e2, _), = other.den.over(u).terms.items()
            L = tuple(max(a, b) for a, b in zip(e1, e2))
            m1 = SparsePoly(u, {tuple(l - a for l, a in zip(L, e1)): 1})
            m2 = SparsePoly(u, {tuple(l - b for l, b in zip(L, e2)): 1})
            return RatFn(self.num * m1 + other.num * m2, SparsePoly(u, {L: 1}))
        return RatFn(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFn":
        return RatFn(-self.num, self.den)

    def __sub__(self, other) -> "RatFn":
        return self + (-_as_ratfn(other))

    def __rsub__(self, other) -> "RatFn":
        return _as_ratfn(other) - self

    def __mul__(self, other) -> "RatFn":
        other = _as_ratfn(other)
        return RatFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFn":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFn(self.den, self.num)

    def __truediv__(self, other) -> "RatFn":
        return self * _as_ratfn(other).inverse()

    def __rtruediv__(self, other) -> "RatFn":
        return _as_ratfn(other) * self.inverse()

    def __pow__(self, k: int) -> "RatFn":
        if k >= 0:
            return RatFn(self.num ** k, self.den ** k)
        return RatFn(self.den ** (-k), self.num ** (-k))

    def derivative(self, name: str) -> "RatFn":
        dn, dd = self.num.derivative(name), self.den.derivative(name)
        if dd.is_zero():
            return RatFn(dn, self.den)
        return RatFn(dn * self.den - self.num * dd, self.den * self.den)

    def order(self, name: str) -> int:
        if self.num.is_zero():
            raise ValueError("order of the zero function is undefined")
        return self.num.order(name) - self.den.order(name)

    def same_as(self, other: "RatFn") -> bool:
        """Equality as functions (cross-multiplication)."""
        other = _as_ratfn(other)
        return (self.num * other.den) == (other.num * self.den)

    def evaluate(self, point: Mapping[str, Fraction]) -> Fraction:
        return self.num.evaluate(point) / self.den.evaluate(point)

    def support(self) -> Tuple[str, ...]:
        s = set(self.num.support()) | set(self.den.support())
        return tuple(v for v in self.variables if v in s)

    def __repr__(self) -> str:
        if self.den == 1:
            return format_poly(self.num)
        return f"({format_poly(self.num)}) / ({format_poly(self.den)})"


def _as_ratfn(x) -> RatFn:
    if isinstance(x, RatFn):
        return x
    return RatFn(_as_poly(x) if not isinstance(x, SparsePoly) else x)


def substitute_poly(p: SparsePoly, mapping: Mapping[str, RatFn]) -> RatFn:
    """p(x -> mapping[x]) over a common denominator prod den_x^deg_x(p)."""
    if p.is_zero():
        return RatFn(SparsePoly.const(0))
    images = {}
    for i, v in enumerate(p.variables):
        img = mapping.get(v)
        images[v] = _as_ratfn(img) if img is not None else RatFn(SparsePoly.var(v))
    degs = {v: p.degree_in(v) for v in p.variables}
    num_pows = {v: [SparsePoly.const(1)] for v in p.variables}
    den_pows = {v: [SparsePoly.const(1)] for v in p.variables}
    for v in p.variables:
        for _ in range(degs[v]):
            num_pows[v].append(num_pows[v][-1] * images[v].num)
            den_pows[v].append(den_pows[v][-1] * images[v].den)
    total = SparsePoly.const(0)
    for e, c in p.terms.items():
        term = SparsePoly.const(c)
        for v, x in zip(p.variables, e):
            term = term * num_pows[v][x] * den_pows[v][degs[v] - x]
        total = total + term
    den = SparsePoly.const(1)
    for v in p.variables:
        den = den * den_pows[v][degs[v]]
    return RatFn(total, den)


def substitute(f: RatFn, mapping: Mapping[str, RatFn]) -> RatFn:
    n = substitute_poly(f.num, mapping)
    d = substitute_poly(f.den, mapping)
    if d.is_zero():
        raise ZeroDivisionError("substitution makes the denominator identically zero")
    return n / d


# ---------------------------------------------------------------------------
# expression parsing: + - * / ^ ( ) with rational literals

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([+\-*/^()])|([^\s+\-*/^()\d][^\s+\-*/^()]*))")


def _tokenize(text: str) -> List[Tuple[str, str]]:
    pos, out = 0, []
    text = text.replace("−", "-").replace("·", "*")
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse expression at {text[pos:]!r}")
        num, op, name = m.groups()
        out.append(("num", num) if num else ("op", op) if op else ("name", name))
        pos = m.end()
    return out


def parse_expr(text: str) -> RatFn:
    tokens = _tokenize(str(text))
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None)

    def take(kind=None, value=None):
        nonlocal pos
        tok = peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ValueError(f"unexpected token {tok[1]!r} in {text!r}")
        pos += 1
        return tok

    def expr():
        val = term()
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term():
        val = unary()
        while peek() in (("op", "*"), ("op", "/")):
            op = take()[1]
            rhs = unary()
            val = val * rhs if op == "*" else val / rhs
        return val

    def unary():
        if peek() == ("op", "-"):
            take()
            return -unary()
        if peek() == ("op", "+"):
            take()
            return unary()
        return power()

    def power():
        base = atom()
        if peek() == ("op", "^"):
            take()
            sign = 1
            if peek() == ("op", "-"):
                take()
                sign = -1
            k = take("num")[1]
            if "." in k:
                raise ValueError(f"non-integer exponent {k} in {text!r}")
            return base ** (sign * int(k))
        return base

    def atom():
        kind, value = peek()
        if kind == "num":
            take()
            return RatFn(SparsePoly.const(Fraction(value)))
        if kind == "name":
            take()
            return RatFn(SparsePoly.var(value))
        if (kind, value) == ("op", "("):
            take()
            val = expr()
            take("op", ")")
            return val
        raise ValueError(f"unexpected token {value!r} in {text!r}")

    result = expr()
    if pos != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return result


# ---------------------------------------------------------------------------
# forms and chart maps

@dataclass(frozen=True)
class TopForm:
    """coeff · dx_1 ^ ... ^ dx_k.

    `factors`, when present, is a factorization coeff = prod f^e kept so that
    substitutions act on small pieces instead of the expanded product.
    """
    coeff: RatFn
    frame: Tuple[str, ...]
    factors: Optional[Tuple[Tuple[RatFn, int], ...]] = None

    def __post_init__(self):
        frame = tuple(self.frame)
        if len(set(frame)) != len(frame):
            raise ValueError("frame variables must be distinct")
        object.__setattr__(self, "frame", frame)

    @classmethod
    def from_factors(cls, factors: Iterable[Tuple[Union[str, RatFn], int]], frame: Sequence[str]) -> "TopForm":
        fs = tuple((parse_expr(f) if isinstance(f, str) else f, int(e)) for f, e in factors)
        return cls(_expand(fs), tuple(frame), fs)

    def __repr__(self) -> str:
        return f"({self.coeff}) d" + "^d".join(self.frame)


@dataclass(frozen=True)
class ChartMap:
    """Old chart variables -> rational functions of the new chart; `frame` is the new frame.

    Old variables absent from `subs` are kept as they are.
    """
    subs: Tuple[Tuple[str, RatFn], ...]
    frame: Tuple[str, ...]
    name: str = ""

    @classmethod
    def make(cls, subs: Mapping[str, Union[str, RatFn]], frame: Sequence[str], name: str = "",
             eliminate: Sequence[Tuple[str, Union[str, RatFn]]] = ()) -> "ChartMap":
        """Build from expressions; `eliminate` substitutions are applied in order to the images."""
        images = {k: (parse_expr(v) if isinstance(v, str) else v) for k, v in subs.items()}
        for var, expr in eliminate:
            e = parse_expr(expr) if isinstance(expr, str) else expr
            images = {k: substitute(v, {var: e}) for k, v in images.items()}
        return cls(tuple(images.items()), tuple(frame), name)

    def mapping(self) -> Dict[str, RatFn]:
        return dict(self.subs)


def determinant(matrix: Sequence[Sequence[RatFn]]) -> RatFn:
    """Determinant of a square RatFn matrix.

    Each row is put over one denominator, then the polynomial determinant is
    expanded along rows with memoization on the set of used columns.
    """
    n = len(matrix)
    if n == 0:
        return RatFn(SparsePoly.const(1))
    rows: List[List[SparsePoly]] = []
    den_total = SparsePoly.const(1)
    for row in matrix:
        row = [_as_ratfn(x) for x in row]
        dens = [x.den for x in row if not x.is_zero()]
        common = _common_denominator(dens)
        polys = []
        for x in row:
            if x.is_zero():
                polys.append(SparsePoly.const(0))
            else:
                polys.append(x.num * exact_divide(common, x.den))
        rows.append(polys)
        den_total = den_total * common

    @lru_cache(maxsize=None)
    def minor(i: int, used: frozenset) -> SparsePoly:
        if i == n:
            return SparsePoly.const(1)
        total = SparsePoly.const(0)
        sign = 1
        for j in range(n):
            if j in used:
                continue
            entry = rows[i][j]
            if not entry.is_zero():
                sub = minor(i + 1, used | {j})
                if not sub.is_zero():
                    term = entry * sub
                    total = total + term if sign > 0 else total - term
            sign = -sign
        return total

    return RatFn(minor(0, frozenset()), den_total)


def _common_denominator(dens: List[SparsePoly]) -> SparsePoly:
    if not dens:
        return SparsePoly.const(1)
    if all(d.is_monomial() for d in dens):
        u: Tuple[str, ...] = ()
        for d in dens:
            u = _union(u, d.variables)
        L = [0] * len(u)
        for d in dens:
            (e, _), = d.over(u).terms.items()
            L = [max(a, b) for a, b in zip(L, e)]
        return SparsePoly(u, {tuple(L): 1})
    distinct: List[SparsePoly] = []
    for d in dens:
        if not any(d == e for e in distinct):
            distinct.append(d)
    out = SparsePoly.const(1)
    for d in distinct:
        out = out * d
    return out


def jacobian(old_frame: Sequence[str], mapping: Mapping[str, RatFn], new_frame: Sequence[str]):
    rows = []
    for v in old_frame:
        img = mapping.get(v, RatFn(SparsePoly.var(v)))
        rows.append([img.derivative(x) for x in new_frame])
    return rows


def pullback_step(form: TopForm, cm: ChartMap) -> TopForm:
    mapping = cm.mapping()
    if len(cm.frame) != len(form.frame):
        raise ValueError(f"frame sizes differ ({len(form.frame)} vs {len(cm.frame)})")
    J = determinant(jacobian(form.frame, mapping, cm.frame))
    if J.is_zero():
        raise ValueError("Jacobian vanishes identically")
    if form.factors is not None:
        fs = tuple((substitute(f, mapping), e) for f, e in form.factors) + ((J, 1),)
        return TopForm(_expand(fs), cm.frame, fs)
    return TopForm(substitute(form.coeff, mapping) * J, cm.frame)


def _expand(factors: Sequence[Tuple[RatFn, int]]) -> RatFn:
    out = RatFn(SparsePoly.const(1))
    for f, e in factors:
        out = out * (f ** e)
    return out


def pullback(form: TopForm, chain: Sequence[ChartMap]) -> TopForm:
    for cm in chain:
        try:
            form = pullback_step(form, cm)
        except (ValueError, ZeroDivisionError) as exc:
            raise type(exc)(f"chart {cm.name or '?'}: {exc}") from exc
    return form


def compose(first: ChartMap, second: ChartMap, name: str = "") -> ChartMap:
    """The single map equal to applying `first` then `second`."""
    inner = second.mapping()
    subs = {k: substitute(v, inner) for k, v in first.subs}
    for k, v in inner.items():
        subs.setdefault(k, v)
    return ChartMap(tuple(subs.items()), second.frame, name or f"{first.name}∘{second.name}")


def order_along(form: Union[TopForm, RatFn], locus: Union[str, Tuple[str, Fraction]]) -> int:
    """Order of the coefficient along {x = 0} or {x - c = 0}; negative = pole."""
    if isinstance(form, TopForm):
        pieces = form.factors if form.factors is not None else ((form.coeff, 1),)
    else:
        pieces = ((form, 1),)
    if isinstance(locus, tuple):
        name, c = locus
        c = Fraction(c)
        if c:
            shift = RatFn(SparsePoly.var(name) + SparsePoly.const(c))
            pieces = tuple((substitute(f, {name: shift}), e) for f, e in pieces)
    else:
        name = locus
    return sum(e * f.order(name) for f, e in pieces)


def load_chain_file(path) -> Tuple[TopForm, List[ChartMap]]:
    """Read a JSON chart-chain file.

    Chain entries are either {"var", "expr"[, "new"]} single substitutions,
    where the new frame swaps `var` for the one fresh variable of `expr`, or
    {"map": {...}, "frame": [...]} for a simultaneous substitution.
    """
    import json
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return chain_from_dict(data)


def chain_from_dict(data: dict) -> Tuple[TopForm, List[ChartMap]]:
    try:
        form_d = data["form"]
        coeff = parse_expr(str(form_d.get("num", "1"))) / parse_expr(str(form_d.get("den", "1")))
        frame = tuple(form_d["frame"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"chart file needs form.num/den/frame ({exc})") from exc
    form = TopForm(coeff, frame)
    known = set(data.get("vars", [])) | set(coeff.variables) | set(frame)
    chain: List[ChartMap] = []
    current = list(frame)
    for k, entry in enumerate(data.get("chain", []), start=1):
        if "map" in entry:
            cm = ChartMap.make(entry["map"], entry["frame"], name=entry.get("name", f"step{k}"))
        else:
            var, expr = entry["var"], parse_expr(entry["expr"])
            fresh = [v for v in expr.support() if v not in known]
            new = entry.get("new")
            if new is None:
                if var in current and len(fresh) != 1:
                    raise ValueError(f"chain step {k}: cannot infer the new frame variable for {var}; give 'new'")
                new = fresh[0] if fresh else None
            frame_k = [new if (v == var and new) else v for v in current]
            cm = ChartMap(((var, expr),), tuple(frame_k), entry.get("name", f"step{k}"))
        known |= {v for _, img in cm.subs for v in img.support()}
        known |= set(cm.frame)
        current = list(cm.frame)
        chain.append(cm)
    return form, chain


# ---------------------------------------------------------------------------
# preset chart chains

@dataclass(frozen=True)
class PoleCheck:
    divisor: str
    chart: str
    locus: Union[str, Tuple[str, Fraction]]
    expected: int


@dataclass(frozen=True)
class PoleRow:
    divisor: str
    chart: str
    computed: int
    expected: int
    coefficient: str

    @property
    def match(self) -> bool:
        return self.computed == self.expected


def _cm(subs, frame, name, eliminate=()) -> ChartMap:
    return ChartMap.make(subs, frame, name, eliminate)


def ex1_start() -> TopForm:
    return TopForm(parse_expr("1/(lam^3*b2p)"), ("lam", "b1", "b2p"))


def ex1_charts() -> Dict[str, List[ChartMap]]:
    u4 = _cm({"lam": "y1*lt", "b1": "y1*b1t", "b2p": "y1*b2t"}, ["y1", "lt", "y2t"], "U4",
             eliminate=[("b2t", "-b1t*y2t"), ("b1t", "-lt^2/y2t^2")])
    return {
        "U1": [
            _cm({"b1": "lam*b1t", "b2p": "lam*b2t"}, ["lam", "b1t", "b2t"], "U1"),
            _cm({"b1t": "-b2t^2*y1t"}, ["lam", "y1t", "b2t"], "U1/eliminate"),
        ],
        "U3": [_cm({"lam": "lt*b2p", "b1": "b1t*b2p"}, ["lt", "b1t", "b2p"], "U3")],
        "U5": [_cm({"lam": "lt*y2p", "b1": "b1t*y2p", "b2p": "b2t*y2p"}, ["y2p", "y1t", "lt"], "U5",
                   eliminate=[("b1t", "-b2t*y1t"), ("b2t", "lt^2")])],
        "U223": [
            _cm({"lam": "lt*b1", "b2p": "b2t*b1"}, ["lt", "b1", "b2t"], "U2"),
            _cm({"lt": "b2t*ltt"}, ["ltt", "b1", "b2t"], "U22"),
            _cm({"ltt": "y1tt*L", "b2t": "y1tt*b2tt"}, ["y1tt", "b1", "L"], "U223",
                eliminate=[("b2tt", "-L^2")]),
        ],
        "U422": [
            u4,
            _cm({"lt": "b1t*ltt", "y2t": "b1t*y2tt"}, ["y1", "ltt", "y2tt"], "U42",
                eliminate=[("b1t", "-ltt^2/y2tt^2")]),
            _cm({"ltt": "y2tt*L"}, ["y1", "y2tt", "L"], "U422"),
        ],
        "U432": [
            u4,
            _cm({"lt": "y2t*ltt"}, ["y1", "ltt", "y2t"], "U43"),
            _cm({"ltt": "B*L", "y2t": "B*y2tt"}, ["y1", "B", "L"], "U432",
                eliminate=[("y2tt", "-L^2")]),
        ],
    }


EX1_CHECKS = (
    PoleCheck("E1", "U1", "lam", 2),
    PoleCheck("D022", "U3", "lt", 3),
    PoleCheck("D210", "U5", "lt", 1),
    PoleCheck("E3^0", "U223", "y1tt", 5),
    PoleCheck("(E2^1)+", "U223", "L", 7),
    PoleCheck("E3^1", "U422", "y2tt", 3),
    PoleCheck("(E2^2)+", "U422", "L", 5),
    PoleCheck("E3^2", "U432", "B", 3),
)


def ex2_start(n: int, coefficient: str = "1/A2") -> TopForm:
    frame = ["V1"] + [f"V{i}" for i in range(3, n + 2)] + [f"A{i}" for i in range(1, n + 2)]
    return TopForm(parse_expr(coefficient), tuple(frame))


def ex2_charts(n: int) -> Dict[str, List[ChartMap]]:
    subs = {"V1": "1/s", "A1": "a1/t", "A2": "1/t"}
    for i in range(3, n + 2):
        subs[f"V{i}"] = f"v{i}/s"
        subs[f"A{i}"] = f"a{i}/t"
    frame = ["s"] + [f"v{i}" for i in range(3, n + 2)] + ["a1", "t"] + [f"a{i}" for i in range(3, n + 2)]
    return {"U": [_cm(subs, frame, "U")]}


def ex2_checks(n: int) -> Tuple[PoleCheck, ...]:
    return (PoleCheck("D1", "U", "s", n + 1), PoleCheck("D2", "U", "t", n + 1))


def ex3_start() -> TopForm:
    factors = [("a2-b2", -6), ("al13-g13", -3), ("be13-al13", -6), ("a2-c2", -4)]
    return TopForm.from_factors(factors, ("a2", "a3", "b2", "c2", "al13", "g13"))


def ex3_charts() -> Dict[str, List[ChartMap]]:
    step0 = _cm({"a2": "a2p+c2", "b2": "b2p+c2", "be13": "bep+al13", "g13": "gp+al13"},
                ["a2p", "a3", "b2p", "c2", "al13", "gp"], "translate")
    return {
        "U1": [step0, _cm({"b2p": "a2p*bt", "bep": "gp*bt"}, ["a2p", "a3", "bt", "c2", "al13", "gp"], "U1")],
        "U2": [step0, _cm({"a2p": "b2p*at", "gp": "bep*at"}, ["b2p", "a3", "at", "c2", "al13", "bep"], "U2")],
    }


EX3_CHECKS = (
    PoleCheck("E", "U1", "a2p", 9),
    PoleCheck("D12,3", "U1", ("bt", Fraction(1)), 6),
    PoleCheck("D23,1", "U1", "bt", 6),
    PoleCheck("D13,2", "U2", "at", 6),
    PoleCheck("(D^2_123)+", "U1", "gp", 9),
)


def preset_data(example: str, n: int = 3):
    ex = example.lower()
    if ex == "ex1":
        return ex1_start(), ex1_charts(), EX1_CHECKS
    if ex == "ex2":
        if n < 1:
            raise ValueError("n must be >= 1")
        return ex2_start(n), ex2_charts(n), ex2_checks(n)
    if ex == "ex3":
        return ex3_start(), ex3_charts(), EX3_CHECKS
    raise ValueError(f"unknown example id {example!r} (expected ex1, ex2 or ex3)")


def chart_forms(example: str, n: int = 3) -> Dict[str, TopForm]:
    start, charts, _ = preset_data(example, n)
    return {name: pullback(start, chain) for name, chain in charts.items()}


def run_preset(example: str, n: int = 3) -> List[PoleRow]:
    """Pole orders (as positive numbers) of the preset form along each listed divisor."""
    _, _, checks = preset_data(example, n)
    forms = chart_forms(example, n)
    rows = []
    for chk in checks:
        form = forms[chk.chart]
        rows.append(PoleRow(chk.divisor, chk.chart, -order_along(form, chk.locus), chk.expected, repr(form.coeff)))
    return rows
