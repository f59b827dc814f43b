"""Shared generators for tests."""
from __future__ import annotations

import random
from typing import List, Sequence

from hypothesis import strategies as st

from heightcensus.heights import TriangleTriple

# acceptance verdicts, echoed in the terminal summary by conftest
VERDICT_LINES: List[str] = []


def random_unimodular(rng: random.Random, dim: int = 3, moves: int = 12, span: int = 2) -> List[List[int]]:
    """Columns of a random matrix in GL_dim(Z), built from elementary column operations."""
    cols = [[int(i == j) for i in range(dim)] for j in range(dim)]
    for _ in range(moves):
        i, j = rng.sample(range(dim), 2)
        k = rng.choice([x for x in range(-span, span + 1) if x])
        cols[i] = [a + k * b for a, b in zip(cols[i], cols[j])]
        if rng.random() < 0.2:
            cols[i], cols[j] = cols[j], cols[i]
        if rng.random() < 0.2:
            cols[i] = [-a for a in cols[i]]
    return cols


def random_triple(rng: random.Random, moves: int = 10) -> TriangleTriple:
    return TriangleTriple.from_columns(*random_unimodular(rng, 3, moves))


@st.composite
def triples(draw, max_moves: int = 10) -> TriangleTriple:
    seed = draw(st.integers(0, 2 ** 32 - 1))
    moves = draw(st.integers(0, max_moves))
    return random_triple(random.Random(seed), moves)


def primitive_vectors(dim_min: int = 2, dim_max: int = 5, bound: int = 30):
    return (st.integers(dim_min, dim_max)
            .flatmap(lambda d: st.lists(st.integers(-bound, bound), min_size=d, max_size=d))
            .filter(lambda v: _gcd_all(v) == 1))


def _gcd_all(v: Sequence[int]) -> int:
    from math import gcd
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return g


def monte_carlo_area(planes, vertices, samples: int, seed: int = 0) -> float:
    """Uniform samples over the bounding square of `vertices`, tested against every half-plane."""
    import numpy as np
    rng = np.random.default_rng(seed)
    xs = [p[0] for p in vertices]
    ys = [p[1] for p in vertices]
    x0, y0 = min(xs), min(ys)
    side = max(max(xs) - x0, max(ys) - y0)
    pts = rng.random((samples, 2)) * side + np.array([x0, y0])
    inside = np.ones(samples, dtype=bool)
    for h in planes:
        inside &= h.a * pts[:, 0] + h.b * pts[:, 1] >= h.c
    return float(inside.mean()) * side * side
