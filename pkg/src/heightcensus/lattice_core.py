"""Exact integer linear algebra on small lattices.

Every norm here is carried squared, as an int or Fraction, so comparisons
never touch floating point.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence, Tuple

IntVector = Tuple[int, ...]


def as_vector(v: Iterable[int]) -> IntVector:
    out = tuple(int(x) for x in v)
    if not out:
        raise ValueError("vector must have length >= 1")
    return out


def dot(v: Sequence[int], w: Sequence[int]) -> int:
    if len(v) != len(w):
        raise ValueError(f"dimension mismatch: {len(v)} vs {len(w)}")
    return sum(a * b for a, b in zip(v, w))


def sq_norm(v: Sequence[int]) -> int:
    return sum(a * a for a in v)


def content(v: Sequence[int]) -> int:
    return reduce(gcd, (abs(x) for x in v), 0)


def is_primitive(v: Sequence[int]) -> bool:
    g = content(v)
    if g == 0:
        raise ValueError("zero vector has no primitivity")
    return g == 1


def canonical_sign(v: Sequence[int]) -> IntVector:
    """Flip v so that its first nonzero coordinate is positive."""
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    raise ValueError("zero vector has no canonical sign")


def cross(v: Sequence[int], w: Sequence[int]) -> IntVector:
    return (v[1] * w[2] - v[2] * w[1],
            v[2] * w[0] - v[0] * w[2],
            v[0] * w[1] - v[1] * w[0])


def det3(a: Sequence[int], b: Sequence[int], c: Sequence[int]) -> int:
    return dot(a, cross(b, c))


def int_det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by Bareiss elimination."""
    m = [list(r) for r in rows]
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("matrix must be square")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def gram(vectors: Sequence[Sequence[int]]) -> list:
    return [[dot(u, v) for v in vectors] for u in vectors]


def covolume_sq(vectors: Sequence[Sequence[int]]) -> int:
    """Squared covolume of the lattice spanned by `vectors`: det of the Gram matrix.

    The empty family spans {0}, whose covolume is 1 by convention.
    """
    vectors = [as_vector(v) for v in vectors]
    if vectors and len({len(v) for v in vectors}) != 1:
        raise ValueError("dimension mismatch among basis vectors")
    value = int_det(gram(vectors))
    if value == 0:
        raise ValueError("degenerate basis")
    return value


def wedge_sq_norm(v: Sequence[int], w: Sequence[int]) -> int:
    # Lagrange identity: |v ^ w|^2 = |v|^2 |w|^2 - <v, w>^2
    p = dot(v, w)
    return sq_norm(v) * sq_norm(w) - p * p


def _column_reduce(w: IntVector):
    """Unimodular column operations taking w to a single nonzero entry.

    Returns (pivot index, pivot value, columns of the transformed identity).
    """
    n = len(w)
    row = list(w)
    cols = [[int(i == j) for i in range(n)] for j in range(n)]
    while True:
        nonzero = [j for j in range(n) if row[j] != 0]
        if len(nonzero) <= 1:
            break
        pivot = min(nonzero, key=lambda j: abs(row[j]))
        for j in nonzero:
            if j != pivot:
                q = row[j] // row[pivot]
                row[j] -= q * row[pivot]
                cols[j] = [a - q * b for a, b in zip(cols[j], cols[pivot])]
    pivot = next(j for j in range(n) if row[j] != 0)
    return pivot, row[pivot], cols


def kernel_basis(w: Sequence[int]) -> Tuple[IntVector, ...]:
    """Basis of {x : <w, x> = 0} for a primitive covector w.

    Column operations bring w to a single entry +-1 while the same operations
    act on the identity; the remaining columns then span the kernel.
    """
    return kernel_with_section(w)[1]


def kernel_with_section(w: Sequence[int]) -> Tuple[IntVector, Tuple[IntVector, ...]]:
    """(x0, kernel basis) with <w, x0> = 1."""
    w = as_vector(w)
    if not is_primitive(w):
        raise ValueError("covector must be primitive")
    pivot, value, cols = _column_reduce(w)
    x0 = tuple(value * a for a in cols[pivot])  # value is +-1
    basis = tuple(tuple(cols[j]) for j in range(len(w)) if j != pivot)
    return x0, basis


def subset_covolume_sq(lines: Sequence[Sequence[int]], subset: Iterable[int]) -> int:
    """Squared covolume of the span of lines indexed (0-based) by `subset`."""
    idx = sorted(set(subset))
    if not idx:
        return 1
    return covolume_sq([lines[i] for i in idx])


def d_IJ_sq(lines: Sequence[Sequence[int]], I: Iterable[int], J: Iterable[int]) -> Fraction:
    """Squared d_IJ for three lines in Z^3; I, J are 1-based index sets."""
    if len(lines) != 3:
        raise ValueError("need exactly three lines")
    if covolume_sq_or_zero(lines) == 0:
        raise ValueError("dependent generators")
    I0 = {i - 1 for i in I}
    J0 = {j - 1 for j in J}
    if not (I0 | J0) <= {0, 1, 2}:
        raise ValueError("index sets must lie in {1, 2, 3}")
    num = subset_covolume_sq(lines, I0) * subset_covolume_sq(lines, J0)
    den = subset_covolume_sq(lines, I0 & J0) * subset_covolume_sq(lines, I0 | J0)
    return Fraction(num, den)


def covolume_sq_or_zero(vectors: Sequence[Sequence[int]]) -> int:
    return int_det(gram(vectors))


def lagrange_reduce(b1: IntVector, b2: IntVector) -> Tuple[IntVector, IntVector]:
    """Gauss-Lagrange reduction of a rank-2 integer basis (exact)."""
    n1, n2 = sq_norm(b1), sq_norm(b2)
    if n1 > n2:
        b1, b2, n1, n2 = b2, b1, n2, n1
    while True:
        # nearest integer to <b1,b2>/|b1|^2
        p = dot(b1, b2)
        q = (2 * p + n1) // (2 * n1)
        if q:
            b2 = tuple(y - q * x for x, y in zip(b1, b2))
            n2 = sq_norm(b2)
        if n2 >= n1:
            return b1, b2
        b1, b2, n1, n2 = b2, b1, n2, n1
