"""Brute-force box scans used as an independent check on the enumerators.

Nothing here imports the rest of the package: the defining equations and
height formulas are written out again directly on numpy arrays.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import List

import numpy as np

# ex2 needs |v| up to R itself (w a unit vector), hence a wider box
DESK_LIMITS = {"ex1": 12, "ex2": 20, "ex3": 12}


def _check_box(example: str, box: int) -> None:
    if box > DESK_LIMITS[example]:
        raise ValueError("oracle limited to desk scale")
    if box < 0:
        raise ValueError("box must be nonnegative")


def _box(dim: int, box: int) -> np.ndarray:
    axes = [np.arange(-box, box + 1, dtype=np.int64)] * dim
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, dim)


def _gcd_rows(X: np.ndarray) -> np.ndarray:
    g = np.abs(X[:, 0])
    for j in range(1, X.shape[1]):
        g = np.gcd(g, np.abs(X[:, j]))
    return g


def _first_nonzero_positive(X: np.ndarray) -> np.ndarray:
    nz = X != 0
    idx = np.argmax(nz, axis=1)
    lead = X[np.arange(len(X)), idx]
    return nz.any(axis=1) & (lead > 0)


def _count_leq(heights_sq: List[Fraction], R) -> int:
    R2 = Fraction(R) ** 2
    return sum(1 for h in heights_sq if h <= R2)


def ex1_heights(q1, q2, box: int, R2_max: int) -> List[Fraction]:
    """Squared norms of all M in [-box, box]^(4x2) with M^T q2 M = q1."""
    _check_box("ex1", box)
    Q = np.array(q2, dtype=np.int64)
    X = _box(4, box)
    val = np.einsum("ij,jk,ik->i", X, Q, X)
    nrm = (X * X).sum(axis=1)
    A = X[(val == q1[0][0]) & (nrm <= R2_max)]
    B = X[(val == q1[1][1]) & (nrm <= R2_max)]
    out: List[Fraction] = []
    if len(A) == 0 or len(B) == 0:
        return out
    cross_val = (A @ Q) @ B.T
    tot = (A * A).sum(axis=1)[:, None] + (B * B).sum(axis=1)[None, :]
    ok = (cross_val == q1[0][1]) & (tot <= R2_max)
    out.extend(Fraction(int(h)) for h in tot[ok])
    return sorted(out)


def ex2_heights(n: int, lam1: int, lam2: int, box: int, R_max) -> List[Fraction]:
    """Heights of pairs (v, +-w) with v, w in the box, <w, v> = +-1."""
    _check_box("ex2", box)
    R2 = Fraction(R_max) ** 2
    X = _box(n + 1, box)
    X = X[_gcd_rows(X) == 1]
    nrm = (X * X).sum(axis=1)
    W = X[_first_nonzero_positive(X)]
    wn = (W * W).sum(axis=1)
    order = np.argsort(wn, kind="stable")
    W, wn = W[order], wn[order]
    out: List[Fraction] = []
    for v, nv in zip(X, nrm):
        base = int(nv) ** lam1
        if base > R2:
            continue
        # w-norms allowed by the height bound: prefix of the sorted list
        limit = np.searchsorted(wn, _root_floor(R2 / base, lam2), side="right")
        Wc, wc = W[:limit], wn[:limit]
        hit = np.abs(Wc @ v) == 1
        for x in wc[hit]:
            h = Fraction(base * int(x) ** lam2)
            if h <= R2:
                out.append(h)
    return sorted(out)


def _root_floor(x: Fraction, k: int) -> int:
    m = x.numerator // x.denominator
    r = int(round(m ** (1.0 / k))) if m > 0 else 0
    while r ** k > m:
        r -= 1
    while (r + 1) ** k <= m:
        r += 1
    return r


def ex3_heights(k1: int, k2: int, box: int, R_max) -> List[Fraction]:
    """Heights of ordered triples of canonical primitive vectors in the box with |det| = 1.

    Pairs are skipped only when |v1|^2 |v2|^2 |v1 ^ v2|^2 alone already pushes
    the height past R_max: each remaining factor of Ht1^2 Ht2^2 is >= 1 and
    Ht^2 >= (Ht1^2 Ht2^2)^min(k1, k2).
    """
    _check_box("ex3", box)
    R2 = Fraction(R_max) ** 2
    kmin = min(k1, k2)
    X = _box(3, box)
    X = X[(_gcd_rows(X) == 1) & _first_nonzero_positive(X)]
    nrm = (X * X).sum(axis=1)
    out: List[Fraction] = []
    for i in range(len(X)):
        a = X[i]
        C = np.cross(a, X)
        cn = (C * C).sum(axis=1)
        pair = nrm[i] * nrm * cn
        keep = (cn > 0) & (pair.astype(object) ** kmin <= R2)
        for j in np.nonzero(keep)[0]:
            b = X[j]
            c = C[j]
            dets = X @ c
            for k in np.nonzero(np.abs(dets) == 1)[0]:
                v = X[k]
                n_a, n_b, n_v = int(nrm[i]), int(nrm[j]), int(nrm[k])
                w_ab = int(cn[j])
                av = np.cross(a, v)
                bv = np.cross(b, v)
                w_av, w_bv = int(av @ av), int(bv @ bv)
                pv = n_a * n_b * n_v
                pw = w_ab * w_av * w_bv
                h1 = Fraction(pv * pv, pw)
                h2 = Fraction(pw * pw, pv)
                h = h1 ** k1 * h2 ** k2
                if h <= R2:
                    out.append(h)
    return sorted(out)


def required_box(example: str, params: dict, R) -> int:
    """Smallest box guaranteed to contain every point of height <= R."""
    R = Fraction(R)
    if example == "ex1":
        return int(R)
    if example == "ex2":
        lo = min(params["lam1"], params["lam2"])
        return _root_floor(R * R, 2 * lo)
    if example == "ex3":
        return _root_floor(R * R, 2 * min(params["k1"], params["k2"]))
    raise ValueError(f"unknown example {example!r}")


def oracle_heights(example: str, params: dict, R_max, box: int | None = None) -> List[Fraction]:
    if box is None:
        box = required_box(example, params, R_max)
    if example == "ex1":
        R = Fraction(R_max)
        return ex1_heights(params["q1"], params["q2"], box, R.numerator ** 2 // R.denominator ** 2)
    if example == "ex2":
        return ex2_heights(params["n"], params["lam1"], params["lam2"], box, R_max)
    if example == "ex3":
        return ex3_heights(params["k1"], params["k2"], box, R_max)
    raise ValueError(f"unknown example {example!r}")


def oracle_scan(example: str, params: dict, R, box: int | None = None) -> int:
    return _count_leq(oracle_heights(example, params, R, box), R)


def count_table(heights: List[Fraction], radii) -> List[int]:
    return [_count_leq(heights, R) for R in radii]


__all__ = ["oracle_scan", "oracle_heights", "count_table", "required_box", "DESK_LIMITS", "gcd"]
