"""Exact squared heights for the three examples."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Tuple

from .lattice_core import (IntVector, as_vector, canonical_sign, cross, det3, dot,
                           int_det, is_primitive, sq_norm, wedge_sq_norm)

Rational = Fraction | int


@dataclass(frozen=True)
class TriangleTriple:
    """Three canonical-sign primitive vectors with |det| = 1 (ordered)."""
    v1: IntVector
    v2: IntVector
    v3: IntVector
    det: int = field(init=False)

    def __post_init__(self):
        vs = tuple(as_vector(v) for v in (self.v1, self.v2, self.v3))
        if any(len(v) != 3 for v in vs):
            raise ValueError("triangle vectors live in Z^3")
        for v in vs:
            if canonical_sign(v) != v:
                raise ValueError(f"vector {v} is not in canonical sign")
        d = det3(*vs)
        if abs(d) != 1:
            raise ValueError(f"|det| must be 1, got {d}")
        object.__setattr__(self, "v1", vs[0])
        object.__setattr__(self, "v2", vs[1])
        object.__setattr__(self, "v3", vs[2])
        object.__setattr__(self, "det", d)

    @classmethod
    def from_columns(cls, v1, v2, v3) -> "TriangleTriple":
        """Build from arbitrary-sign vectors, canonicalizing each."""
        return cls(canonical_sign(v1), canonical_sign(v2), canonical_sign(v3))

    @property
    def vectors(self) -> Tuple[IntVector, IntVector, IntVector]:
        return (self.v1, self.v2, self.v3)

    def cofactor(self) -> "TriangleTriple":
        a, b, c = self.vectors
        return TriangleTriple.from_columns(cross(b, c), cross(c, a), cross(a, b))


@dataclass(frozen=True)
class Splitting:
    """Z^{n+1} = Zv + ker(w); w is stored sign-canonical."""
    v: IntVector
    w: IntVector

    def __post_init__(self):
        v, w = as_vector(self.v), as_vector(self.w)
        if len(v) != len(w) or len(v) < 2:
            raise ValueError("v and w must share a dimension >= 2")
        if not is_primitive(v) or not is_primitive(w):
            raise ValueError("v and w must be primitive")
        if abs(dot(v, w)) != 1:
            raise ValueError("<w, v> must be +-1")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "w", canonical_sign(w))


@dataclass(frozen=True)
class QuadricPairInstance:
    q1: Tuple[Tuple[int, ...], ...]
    q2: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        q1 = tuple(tuple(int(x) for x in r) for r in self.q1)
        q2 = tuple(tuple(int(x) for x in r) for r in self.q2)
        for name, q, k in (("Q1", q1, 2), ("Q2", q2, 4)):
            if len(q) != k or any(len(r) != k for r in q):
                raise ValueError(f"{name} must be {k}x{k}")
            if any(q[i][j] != q[j][i] for i in range(k) for j in range(k)):
                raise ValueError(f"{name} must be symmetric")
            if int_det(q) == 0:
                raise ValueError(f"{name} must be nondegenerate")
        if signature(q1) != (1, 1):
            raise ValueError("Q1 must have signature (1,1)")
        if signature(q2) != (2, 2):
            raise ValueError("Q2 must have signature (2,2)")
        object.__setattr__(self, "q1", q1)
        object.__setattr__(self, "q2", q2)

    def form2(self, x: Sequence[int], y: Sequence[int]) -> int:
        return sum(x[i] * self.q2[i][j] * y[j] for i in range(4) for j in range(4))


def signature(q: Sequence[Sequence[int]]) -> Tuple[int, int]:
    """(positive, negative) inertia of a symmetric rational matrix.

    Symmetric Gaussian elimination over Q (Sylvester's law of inertia).
    """
    m = [[Fraction(x) for x in r] for r in q]
    n = len(m)
    pos = neg = 0
    k = 0
    while k < n:
        piv = next((i for i in range(k, n) if m[i][i] != 0), None)
        if piv is None:
            off = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if m[i][j] != 0), None)
            if off is None:
                break
            i, j = off
            # replace row/col i by i + j, which has diagonal 2 m_ij != 0
            for t in range(n):
                m[i][t] += m[j][t]
            for t in range(n):
                m[t][i] += m[t][j]
            piv = i
        m[k], m[piv] = m[piv], m[k]
        for r in m:
            r[k], r[piv] = r[piv], r[k]
        d = m[k][k]
        if d > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            f = m[i][k] / d
            if f:
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
        for i in range(k + 1, n):
            m[k][i] = Fraction(0)
        k += 1
    return pos, neg


DEFAULT_INSTANCE = QuadricPairInstance(
    q1=((1, 0), (0, -2)),
    q2=((1, 0, 0, 0), (0, -2, 0, 0), (0, 0, 1, 0), (0, 0, 0, -3)),
)

# x1 x2 and x1 x4 + x2 x3, both hyperbolic
SPLIT_INSTANCE = QuadricPairInstance(
    q1=((0, 1), (1, 0)),
    q2=((0, 0, 0, 1), (0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 0)),
)


@dataclass(frozen=True)
class QuadricPoint:
    cols: Tuple[IntVector, IntVector]
    instance: QuadricPairInstance = DEFAULT_INSTANCE

    def __post_init__(self):
        c1, c2 = (as_vector(c) for c in self.cols)
        if len(c1) != 4 or len(c2) != 4:
            raise ValueError("columns must lie in Z^4")
        inst = self.instance
        got = ((inst.form2(c1, c1), inst.form2(c1, c2)), (inst.form2(c2, c1), inst.form2(c2, c2)))
        if got != inst.q1:
            raise ValueError(f"M^T Q2 M = {got} differs from Q1 = {inst.q1}")
        object.__setattr__(self, "cols", (c1, c2))


def ht_ex1_sq(cols: Sequence[Sequence[int]] | QuadricPoint) -> int:
    if isinstance(cols, QuadricPoint):
        cols = cols.cols
    return sum(sq_norm(c) for c in cols)


def ht_ex2_sq(s: Splitting, lam1: int, lam2: int) -> int:
    # the covolume of ker(w) equals |w| for primitive w
    return sq_norm(s.v) ** lam1 * sq_norm(s.w) ** lam2


def _norm_products(t: TriangleTriple) -> Tuple[int, int]:
    a, b, c = t.vectors
    prod_v = sq_norm(a) * sq_norm(b) * sq_norm(c)
    prod_w = wedge_sq_norm(a, b) * wedge_sq_norm(a, c) * wedge_sq_norm(b, c)
    return prod_v, prod_w


def ht1_sq(t: TriangleTriple) -> Fraction:
    prod_v, prod_w = _norm_products(t)
    return Fraction(prod_v * prod_v, prod_w)


def ht2_sq(t: TriangleTriple) -> Fraction:
    prod_v, prod_w = _norm_products(t)
    return Fraction(prod_w * prod_w, prod_v)


def ht_ex3_sq(t: TriangleTriple, k1: int, k2: int) -> Fraction:
    return ht1_sq(t) ** k1 * ht2_sq(t) ** k2


def ht_ex3_leq(t: TriangleTriple, k1: int, k2: int, R: Rational) -> bool:
    R = Fraction(R)
    return ht_ex3_sq(t, k1, k2) <= R * R
