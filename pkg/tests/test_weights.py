import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from heightcensus.heights import TriangleTriple
from heightcensus.weights import (HalfPlane, clip_polygon, omega_constraints, omega_polygon,
                                  polygon_area, shoelace, weight)

from helpers import monte_carlo_area, random_triple, triples

STD = TriangleTriple((1, 0, 0), (0, 1, 0), (0, 0, 1))
SKEW = TriangleTriple((1, 0, 0), (0, 1, 0), (1, 1, 1))


def hexagon(s: float):
    return [HalfPlane(1, 0, -s), HalfPlane(-1, 0, -s), HalfPlane(0, 1, -s), HalfPlane(0, -1, -s),
            HalfPlane(1, 1, -s), HalfPlane(-1, -1, -s)]


class TestConstraints:
    def test_standard_basis(self):
        planes = omega_constraints(STD, math.exp(-1))
        assert len(planes) == 6
        assert all(abs(p.c + 1) < 1e-15 for p in planes)

    def test_skew_constraint_for_13(self):
        planes = omega_constraints(SKEW, math.exp(-1))
        # I = {1,3}: t1 + t3 = -t2
        p = next(p for p in planes if (p.a, p.b) == (0.0, -1.0))
        assert p.c == pytest.approx(-0.5 * math.log(2) - 1, abs=1e-15)

    def test_eta_one_rhs_nonpositive(self):
        assert all(p.c <= 0 for p in omega_constraints(SKEW, 1.0))

    def test_infeasible_eta(self):
        with pytest.raises(ValueError, match="weight polytope infeasible by convention"):
            omega_constraints(STD, 1.5)


class TestArea:
    @pytest.mark.parametrize("s", [0.1, 1.0, 2.5, 40.0])
    def test_hexagon(self, s):
        assert polygon_area(hexagon(s)) == pytest.approx(3 * s * s, rel=1e-12)

    def test_infeasible(self):
        assert polygon_area([HalfPlane(1, 0, 1), HalfPlane(-1, 0, 0)]) == 0.0

    def test_unconstrained_sentinel(self):
        assert polygon_area([]) == pytest.approx(1e12)

    def test_redundant_and_repeated_planes(self):
        planes = hexagon(1.0) + hexagon(1.0) + [HalfPlane(1, 0, -5)]
        assert polygon_area(planes) == pytest.approx(3.0, rel=1e-12)
        assert len(clip_polygon(planes)) == 6

    def test_vertices_counter_clockwise(self):
        verts = clip_polygon(hexagon(1.0))
        signed = sum(verts[i - 1][0] * verts[i][1] - verts[i][0] * verts[i - 1][1] for i in range(len(verts)))
        assert signed > 0
        assert shoelace(verts) == pytest.approx(3.0)

    @given(triples(), st.floats(0.05, 1.0))
    def test_at_most_six_vertices(self, t, eta):
        assert len(omega_polygon(t, eta)) <= 6

    @given(triples(), st.floats(0.05, 0.9), st.floats(0.01, 0.5))
    def test_area_monotone_in_eta(self, t, eta, drop):
        smaller = eta * (1 - drop)
        assert polygon_area(omega_constraints(t, smaller)) >= polygon_area(omega_constraints(t, eta)) - 1e-12

    @given(triples())
    def test_permutation_invariance(self, t):
        a, b, c = t.vectors
        base = polygon_area(omega_constraints(t))
        for perm in ((b, a, c), (c, a, b)):
            assert polygon_area(omega_constraints(TriangleTriple(*perm))) == pytest.approx(base, rel=1e-9, abs=1e-12)

    def test_monte_carlo_small(self):
        rng = random.Random(11)
        for _ in range(10):
            t = random_triple(rng)
            planes = omega_constraints(t, 0.5)
            verts = clip_polygon(planes)
            exact = polygon_area(planes)
            assert monte_carlo_area(planes, verts, 200_000, seed=3) == pytest.approx(exact, rel=0.02)


class TestWeight:
    def test_standard_basis(self):
        assert weight(STD, math.exp(-1)) == pytest.approx(1 / 3, rel=1e-12)
        assert weight(STD, 1.0) == 1.0
        assert polygon_area(omega_constraints(STD, 0.5)) == pytest.approx(3 * math.log(2) ** 2, rel=1e-12)
        assert weight(STD, 0.5) == pytest.approx(1 / (3 * math.log(2) ** 2), rel=1e-12)

    @given(triples(), st.floats(0.01, 1.0))
    def test_range(self, t, eta):
        assert 0 < weight(t, eta) <= 1
