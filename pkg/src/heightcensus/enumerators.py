"""Counting integral points of bounded height for the three examples.

All membership tests are exact integer comparisons. Floating point only
appears in loop bounds that are widened and then re-checked exactly.

Each example exposes `partition_keys(...)` and `run_partition(...)` so the
census runner can split the outermost loop across workers; `enumerate_*`
is the single-process composition of the two.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .heights import DEFAULT_INSTANCE, QuadricPairInstance, TriangleTriple
from .lattice_core import (canonical_sign, cross, dot, kernel_with_section,
                           lagrange_reduce, sq_norm)
from .weights import DEFAULT_ETA, weight

Sink = Callable[[dict], None]


@dataclass
class Tally:
    """Partial result of one partition; merged by exact addition."""
    count: int = 0
    scanned: int = 0
    weighted: Fraction = Fraction(0)

    def __add__(self, other: "Tally") -> "Tally":
        return Tally(self.count + other.count, self.scanned + other.scanned,
                     self.weighted + other.weighted)


def as_fraction(R) -> Fraction:
    R = Fraction(R)
    if R < 0:
        raise ValueError("R must be nonnegative")
    return R


def iroot(m: int, k: int) -> int:
    """floor(m ** (1/k)) for m >= 0, exactly."""
    if m < 0:
        raise ValueError("negative radicand")
    if m < 2 or k == 1:
        return m
    x = int(round(m ** (1.0 / k)))
    while x ** k > m:
        x -= 1
    while (x + 1) ** k <= m:
        x += 1
    return x


def max_power_under(R: Fraction, k: int, factor: int = 1) -> int:
    """Largest integer N >= 0 with N**k * factor <= R**2 (or -1 if none)."""
    p, q = R.numerator, R.denominator
    bound = (p * p) // (q * q * factor)
    if bound < 0:
        return -1
    return iroot(bound, k)


def emit_point(sink: Optional[Sink], cols, ht_sq) -> None:
    if sink is not None:
        ht = Fraction(ht_sq)
        sink({"cols": [list(c) for c in cols], "ht_sq": f"{ht.numerator}/{ht.denominator}"})


def jsonl_sink(stream) -> Sink:
    def write(record: dict) -> None:
        stream.write(json.dumps(record) + "\n")
    return write


# ---------------------------------------------------------------------------
# vectors in balls

def ball_points(dim: int, bound: int) -> Iterator[Tuple[int, ...]]:
    """All integer vectors of length `dim` with squared norm <= bound."""
    if dim == 0:
        yield ()
        return
    r = isqrt(bound)
    for x in range(-r, r + 1):
        for rest in ball_points(dim - 1, bound - x * x):
            yield (x,) + rest


def canonical_ball(dim: int, bound: int, first: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """Primitive vectors with first nonzero coordinate positive and |u|^2 <= bound.

    With `first` given, only vectors whose leading coordinate equals it.
    """
    if dim == 0 or bound < 1:
        return
    firsts = range(0, isqrt(bound) + 1) if first is None else [first]
    for x in firsts:
        if x < 0 or x * x > bound:
            continue
        rest_iter = ball_points(dim - 1, bound - x * x) if x > 0 else canonical_ball(dim - 1, bound)
        for rest in rest_iter:
            g = x
            for y in rest:
                g = gcd(g, y)
            if g == 1:
                yield (x,) + rest


# ---------------------------------------------------------------------------
# affine lattices {x : <u, x> = 1} intersected with a shell lo <= |x|^2 <= hi

def quad_interval(A: int, B: int, C: int) -> Tuple[int, int]:
    """Integers a with A a^2 + 2 B a + C <= 0 (A > 0) as an inclusive range."""
    D = B * B - A * C
    if D < 0:
        return 1, 0
    s = isqrt(D)
    hi = (-B + s) // A
    while A * (hi + 1) ** 2 + 2 * B * (hi + 1) + C <= 0:
        hi += 1
    lo = -((B + s) // A)
    while A * (lo - 1) ** 2 + 2 * B * (lo - 1) + C <= 0:
        lo -= 1
    return lo, hi


class AffineSlice:
    """The coset x0 + span(basis) of a primitive covector's kernel.

    The first basis vector is the innermost direction, solved exactly by a
    quadratic; the others are enumerated with Gram-Schmidt bounds.
    """

    def __init__(self, covector: Sequence[int]):
        x0, basis = kernel_with_section(covector)
        basis = list(basis)
        if len(basis) == 2:
            basis = list(lagrange_reduce(basis[0], basis[1]))
        else:
            basis.sort(key=sq_norm)
        self.x0 = x0
        self.basis = basis
        self.rank = len(basis)
        self._gram_schmidt()

    def _gram_schmidt(self) -> None:
        b = [np.array(v, dtype=float) for v in self.basis]
        star: List[np.ndarray] = []
        self.mu = [[0.0] * self.rank for _ in range(self.rank)]
        for i, v in enumerate(b):
            w = v.copy()
            for j in range(i):
                self.mu[i][j] = float(v @ star[j]) / float(star[j] @ star[j])
                w = w - self.mu[i][j] * star[j]
            star.append(w)
        self.star_sq = [float(s @ s) for s in star]
        x0 = np.array(self.x0, dtype=float)
        self.tau = [float(x0 @ s) / n for s, n in zip(star, self.star_sq)]
        proj = sum((t * s for t, s in zip(self.tau, star)), np.zeros_like(x0))
        self.perp_sq = float((x0 - proj) @ (x0 - proj))

    def segments(self, lo: int, hi: int) -> Iterator[Tuple[Tuple[int, ...], int, int]]:
        """Yield (base, a_lo, a_hi): points base + a * basis[0], lo <= |.|^2 <= hi."""
        if hi < max(lo, 0):
            return
        outer = [0] * self.rank
        yield from self._level(self.rank - 1, hi - self.perp_sq, outer, lo, hi)

    def _level(self, j: int, budget: float, outer: list, lo: int, hi: int):
        if j == 0:
            base = list(self.x0)
            for i in range(1, self.rank):
                if outer[i]:
                    bi = self.basis[i]
                    for t in range(len(base)):
                        base[t] += outer[i] * bi[t]
            b0 = self.basis[0]
            A = sq_norm(b0)
            B = dot(b0, base)
            C = sq_norm(base)
            top = quad_interval(A, B, C - hi)
            if top[0] > top[1]:
                return
            inner = quad_interval(A, B, C - (lo - 1)) if lo > 0 else (1, 0)
            base = tuple(base)
            if inner[0] > inner[1]:
                yield base, top[0], top[1]
            else:
                if top[0] < inner[0]:
                    yield base, top[0], inner[0] - 1
                if inner[1] < top[1]:
                    yield base, inner[1] + 1, top[1]
            return
        center = -(self.tau[j] + sum(self.mu[i][j] * outer[i] for i in range(j + 1, self.rank)))
        slack = 1e-7 * (1.0 + abs(center) + abs(budget))
        radius = math.sqrt(max(budget, 0.0) / self.star_sq[j]) + slack
        for k in range(math.ceil(center - radius), math.floor(center + radius) + 1):
            outer[j] = k
            used = (k - center) ** 2 * self.star_sq[j]
            yield from self._level(j - 1, budget - used + slack * self.star_sq[j], outer, lo, hi)
        outer[j] = 0

    def count(self, lo: int, hi: int) -> Tuple[int, int]:
        """(points, rows visited)"""
        total = rows = 0
        for _, a, b in self.segments(lo, hi):
            total += b - a + 1
            rows += 1
        return total, rows

    def points(self, lo: int, hi: int) -> Iterator[Tuple[int, ...]]:
        b0 = self.basis[0]
        for base, a_lo, a_hi in self.segments(lo, hi):
            for a in range(a_lo, a_hi + 1):
                yield tuple(x + a * y for x, y in zip(base, b0))


# ---------------------------------------------------------------------------
# Example II: splittings Z^{n+1} = Zv + ker(w)

@dataclass(frozen=True)
class Ex2Params:
    n: int
    lam1: int
    lam2: int

    def __post_init__(self):
        if self.n < 1 or self.lam1 < 1 or self.lam2 < 1:
            raise ValueError("need n >= 1 and positive integer lambdas")


def ex2_partition_keys(p: Ex2Params, R) -> List[int]:
    R = as_fraction(R)
    bound = max_power_under(R, p.lam1 + p.lam2)
    if bound < 1:
        return []
    return list(range(0, isqrt(bound) + 1))


def ex2_run_partition(p: Ex2Params, R, key: int, sink: Optional[Sink] = None) -> Tally:
    """Pairs whose shorter member (w on ties) is canonical with leading coordinate `key`.

    Pairs with |w|^2 <= |v|^2 are found from w; the rest from v, so both outer
    loops stay inside the ball (|u|^2)^(lam1+lam2) <= R^2.
    """
    R = as_fraction(R)
    dim = p.n + 1
    bound = max_power_under(R, p.lam1 + p.lam2)
    tally = Tally()
    if bound < 1:
        return tally
    for u in canonical_ball(dim, bound, first=key):
        U = sq_norm(u)
        tally.scanned += 1
        # u plays w: v on the coset <w, v> = 1 with |v|^2 >= |w|^2, times 2 for -v
        vmax = max_power_under(R, p.lam1, U ** p.lam2)
        if vmax >= U:
            piece = AffineSlice(u)
            if sink is None:
                got, rows = piece.count(U, vmax)
            else:
                got = rows = 0
                for v in piece.points(U, vmax):
                    got += 1
                    ht = sq_norm(v) ** p.lam1 * U ** p.lam2
                    emit_point(sink, (v, u), ht)
                    emit_point(sink, (tuple(-x for x in v), u), ht)
            tally.count += 2 * got
            tally.scanned += rows
        # u plays v (and -v): one w per class with <w, v> = 1 and |w|^2 > |v|^2
        wmax = max_power_under(R, p.lam2, U ** p.lam1)
        if wmax > U:
            piece = AffineSlice(u)
            if sink is None:
                got, rows = piece.count(U + 1, wmax)
            else:
                got = rows = 0
                for w in piece.points(U + 1, wmax):
                    got += 1
                    ht = U ** p.lam1 * sq_norm(w) ** p.lam2
                    wc = canonical_sign(w)
                    emit_point(sink, (u, wc), ht)
                    emit_point(sink, (tuple(-x for x in u), wc), ht)
            tally.count += 2 * got
            tally.scanned += rows
    return tally


def enumerate_ex2(n: int, lam1: int, lam2: int, R, sink: Optional[Sink] = None) -> Tally:
    p = Ex2Params(n, lam1, lam2)
    total = Tally()
    for key in ex2_partition_keys(p, R):
        total = total + ex2_run_partition(p, R, key, sink)
    return total


# ---------------------------------------------------------------------------
# Example III: ordered unimodular line triples, weighted

@dataclass(frozen=True)
class Ex3Params:
    k1: int
    k2: int
    eta: float = DEFAULT_ETA

    def __post_init__(self):
        if self.k1 < 1 or self.k2 < 1:
            raise ValueError("kappas must be positive integers")
        if not 0 < self.eta <= 1:
            raise ValueError("eta must lie in (0, 1]")


def ex3_product_bound(p: Ex3Params, R) -> int:
    """Largest P with P**min(k) <= R^2.

    Ht^2 >= (Ht1^2 Ht2^2)^min(k) = (prod |v_i|^2 prod |v_i ^ v_j|^2)^min(k)
    because both squared heights are >= 1 and det = +-1.
    """
    return max_power_under(as_fraction(R), min(p.k1, p.k2))


@lru_cache(maxsize=8)
def _sorted_canonical(dim: int, bound: int) -> Tuple[Tuple[Tuple[int, ...], ...], Tuple[int, ...]]:
    vecs = sorted(canonical_ball(dim, bound), key=lambda v: (sq_norm(v), v))
    return tuple(vecs), tuple(sq_norm(v) for v in vecs)


def ex3_partition_keys(p: Ex3Params, R) -> List[int]:
    P = ex3_product_bound(p, R)
    if P < 1:
        return []
    return list(range(0, isqrt(P) + 1))


def ex3_run_partition(p: Ex3Params, R, key: int, sink: Optional[Sink] = None) -> Tally:
    R = as_fraction(R)
    P = ex3_product_bound(p, R)
    tally = Tally()
    if P < 1:
        return tally
    num_R, den_R = R.numerator ** 2, R.denominator ** 2
    vecs, norms = _sorted_canonical(3, P)
    from bisect import bisect_right
    for v1 in canonical_ball(3, P, first=key):
        n1 = sq_norm(v1)
        stop = bisect_right(norms, P // n1)
        for idx in range(stop):
            v2, n2 = vecs[idx], norms[idx]
            c = cross(v1, v2)
            w12 = sq_norm(c)
            tally.scanned += 1
            if w12 == 0 or n1 * n2 * w12 > P:
                continue
            if gcd(gcd(c[0], c[1]), c[2]) != 1:
                continue
            bound3 = P // (n1 * n2 * w12)
            for x in AffineSlice(c).points(1, bound3):
                v3 = canonical_sign(x)
                n3 = sq_norm(v3)
                w13 = sq_norm(cross(v1, v3))
                w23 = sq_norm(cross(v2, v3))
                prod_v = n1 * n2 * n3
                prod_w = w12 * w13 * w23
                # Ht^2 = prod_v^(2k1 - k2) * prod_w^(2k2 - k1)
                num = prod_v ** (2 * p.k1) * prod_w ** (2 * p.k2)
                den = prod_w ** p.k1 * prod_v ** p.k2
                tally.scanned += 1
                if num * den_R <= num_R * den:
                    t = TriangleTriple(v1, v2, v3)
                    tally.count += 1
                    tally.weighted += Fraction(weight(t, p.eta))
                    emit_point(sink, (v1, v2, v3), Fraction(num, den))
    return tally


def enumerate_ex3(k1: int, k2: int, R, eta: float = DEFAULT_ETA,
                  sink: Optional[Sink] = None) -> Tally:
    p = Ex3Params(k1, k2, eta)
    total = Tally()
    for key in ex3_partition_keys(p, R):
        total = total + ex3_run_partition(p, R, key, sink)
    return total


# ---------------------------------------------------------------------------
# Example I: 4x2 integer matrices with M^T Q2 M = Q1

def _isqrt_array(D: np.ndarray) -> np.ndarray:
    s = np.floor(np.sqrt(np.maximum(D, 0).astype(float))).astype(np.int64)
    s -= (s * s > D).astype(np.int64)
    s += ((s + 1) * (s + 1) <= D).astype(np.int64)
    return s


def column_candidates(q2: Sequence[Sequence[int]], target: int, R2: int) -> np.ndarray:
    """All c in Z^4 with c^T q2 c = target and |c|^2 <= R2, sorted by (|c|^2, c).

    Three coordinates range over a ball; the fourth solves a quadratic (or
    linear, for forms with zero diagonal) equation exactly.
    """
    Q = np.array(q2, dtype=np.int64)
    diag = [k for k in range(4) if Q[k, k] != 0]
    if diag:
        k = max(diag, key=lambda i: (abs(int(Q[i, i])) == 1, -i))
    else:
        k = next(i for i in range(4) if np.any(Q[i] != 0))
    others = [i for i in range(4) if i != k]
    a = int(Q[k, k])
    found = []
    r = isqrt(R2)
    grid = np.arange(-r, r + 1, dtype=np.int64)
    y2, y3 = np.meshgrid(grid, grid, indexing="ij")
    y2, y3 = y2.ravel(), y3.ravel()
    for y1v in range(-r, r + 1):
        keep = y1v * y1v + y2 * y2 + y3 * y3 <= R2
        Y = np.stack([np.full(int(keep.sum()), y1v, dtype=np.int64), y2[keep], y3[keep]], axis=1)
        rest = (Y * Y).sum(axis=1)
        b = Y @ Q[k, others]
        c = np.einsum("ij,jk,ik->i", Y, Q[np.ix_(others, others)], Y) - target
        sols = []
        if a != 0:
            D = b * b - a * c
            ok = D >= 0
            s = _isqrt_array(np.where(ok, D, 0))
            ok &= s * s == D
            for sign in (1, -1):
                num = -b + sign * s
                good = ok & (num % a == 0)
                if sign == -1:
                    good &= s != 0
                x = np.where(good, num // a, 0)
                good &= x * x + rest <= R2
                sols.append((Y[good], x[good]))
        else:
            lin = b != 0
            num, den = -c, 2 * b
            safe = np.where(lin, den, 1)
            good = lin & (num % safe == 0)
            x = np.where(good, num // safe, 0)
            good &= x * x + rest <= R2
            sols.append((Y[good], x[good]))
            free = (~lin) & (c == 0)
            for yy, rr in zip(Y[free], rest[free]):
                m = isqrt(int(R2 - rr))
                xs = np.arange(-m, m + 1, dtype=np.int64)
                sols.append((np.repeat(yy[None, :], len(xs), axis=0), xs))
        for YY, xx in sols:
            if len(xx) == 0:
                continue
            C = np.empty((len(xx), 4), dtype=np.int64)
            C[:, k] = xx
            C[:, others] = YY
            found.append(C)
    if not found:
        return np.zeros((0, 4), dtype=np.int64)
    allc = np.concatenate(found)
    norms = (allc * allc).sum(axis=1)
    order = np.lexsort(tuple(allc[:, i] for i in range(3, -1, -1)) + (norms,))
    return allc[order]


@lru_cache(maxsize=4)
def _ex1_columns(inst: QuadricPairInstance, R2: int):
    c1 = column_candidates(inst.q2, inst.q1[0][0], R2)
    c2 = column_candidates(inst.q2, inst.q1[1][1], R2)
    return c1, (c1 * c1).sum(axis=1), c2, (c2 * c2).sum(axis=1)


def ex1_radius_sq(R) -> int:
    R = as_fraction(R)
    return R.numerator ** 2 // R.denominator ** 2


def ex1_partition_keys(inst: QuadricPairInstance, R) -> List[int]:
    R2 = ex1_radius_sq(R)
    r = isqrt(R2)
    return list(range(-r, r + 1))


def ex1_run_partition(inst: QuadricPairInstance, R, key: int,
                      sink: Optional[Sink] = None, block: int = 1 << 22) -> Tally:
    """Matrices whose first column has leading entry `key`."""
    R2 = ex1_radius_sq(R)
    tally = Tally()
    c1, n1, c2, n2 = _ex1_columns(inst, R2)
    rows = c1[:, 0] == key
    A, nA = c1[rows], n1[rows]
    if len(A) == 0 or len(c2) == 0:
        return tally
    Q = np.array(inst.q2, dtype=np.int64)
    q12 = inst.q1[0][1]
    P = A @ Q
    m = int(np.searchsorted(n2, R2 - nA.min(), side="right"))
    if m == 0:
        return tally
    step = max(1, block // m)
    for s in range(0, len(A), step):
        Pb, nb = P[s:s + step], nA[s:s + step]
        Bm = Pb @ c2[:m].T
        mask = (Bm == q12) & (nb[:, None] + n2[None, :m] <= R2)
        tally.scanned += Bm.size
        if sink is None:
            tally.count += int(mask.sum())
        else:
            ii, jj = np.nonzero(mask)
            for i, j in zip(ii, jj):
                col1, col2 = A[s + i].tolist(), c2[j].tolist()
                emit_point(sink, (col1, col2), sq_norm(col1) + sq_norm(col2))
            tally.count += len(ii)
    return tally


def enumerate_ex1(inst: QuadricPairInstance = DEFAULT_INSTANCE, R=1,
                  sink: Optional[Sink] = None) -> Tally:
    total = Tally()
    for key in ex1_partition_keys(inst, R):
        total = total + ex1_run_partition(inst, R, key, sink)
    return total
