import random
from fractions import Fraction
from itertools import chain, combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from heightcensus.lattice_core import (canonical_sign, content, covolume_sq, cross, d_IJ_sq, det3,
                                       dot, int_det, is_primitive, kernel_basis, kernel_with_section,
                                       lagrange_reduce, sq_norm, wedge_sq_norm)

from helpers import primitive_vectors, random_unimodular

E1, E2, E3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)


class TestPrimitivity:
    @pytest.mark.parametrize("v, expected", [((1, 0, 0), True), ((2, 4, 6), False), ((6, 10, 15), True)])
    def test_examples(self, v, expected):
        assert is_primitive(v) is expected

    def test_zero_vector(self):
        with pytest.raises(ValueError, match="zero vector has no primitivity"):
            is_primitive((0, 0, 0))

    def test_content(self):
        assert content((4, -6, 10)) == 2


class TestCovolume:
    def test_examples(self):
        assert covolume_sq([E1, E2, E3]) == 1
        assert covolume_sq([(1, 1, 1)]) == 3
        assert covolume_sq([(1, 0, 0), (1, 1, 1)]) == 2

    def test_degenerate(self):
        with pytest.raises(ValueError, match="degenerate basis"):
            covolume_sq([(1, 2, 3), (2, 4, 6)])

    def test_empty_family(self):
        assert covolume_sq([]) == 1

    @given(st.integers(0, 2 ** 32 - 1), st.integers(2, 3))
    def test_unimodular_invariance(self, seed, rank):
        rng = random.Random(seed)
        while True:
            B = [[rng.randint(-5, 5) for _ in range(4)] for _ in range(rank)]
            if int_det([[dot(u, v) for v in B] for u in B]):
                break
        U = random_unimodular(rng, rank, moves=8)
        # new basis vectors are integer combinations of the old ones
        B2 = [[sum(U[j][i] * B[i][k] for i in range(rank)) for k in range(4)] for j in range(rank)]
        assert covolume_sq(B2) == covolume_sq(B)


class TestWedge:
    def test_examples(self):
        assert wedge_sq_norm(E1, E2) == 1
        assert wedge_sq_norm(E1, (1, 1, 1)) == 2
        assert wedge_sq_norm((3, 1, 4), (3, 1, 4)) == 0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            wedge_sq_norm((1, 2), (1, 2, 3))

    @given(st.lists(st.integers(-20, 20), min_size=4, max_size=4),
           st.lists(st.integers(-20, 20), min_size=4, max_size=4))
    def test_hadamard(self, v, w):
        ws = wedge_sq_norm(v, w)
        assert ws <= sq_norm(v) * sq_norm(w)
        assert (ws == sq_norm(v) * sq_norm(w)) == (dot(v, w) == 0)

    @given(st.lists(st.integers(-20, 20), min_size=3, max_size=3),
           st.lists(st.integers(-20, 20), min_size=3, max_size=3))
    def test_matches_cross_product_in_3d(self, v, w):
        assert wedge_sq_norm(v, w) == sq_norm(cross(v, w))


class TestKernel:
    def test_examples(self):
        assert covolume_sq(kernel_basis((0, 0, 1))) == 1
        basis = kernel_basis((1, 1))
        assert len(basis) == 1 and canonical_sign(basis[0]) == (1, -1)
        assert covolume_sq(kernel_basis((1, 2, 3))) == 14

    def test_non_primitive(self):
        with pytest.raises(ValueError, match="covector must be primitive"):
            kernel_basis((2, 4))

    @given(primitive_vectors(2, 5, 40))
    def test_covolume_identity(self, w):
        basis = kernel_basis(w)
        assert len(basis) == len(w) - 1
        assert all(dot(w, b) == 0 for b in basis)
        assert covolume_sq(basis) == sq_norm(w)

    @given(primitive_vectors(2, 5, 40))
    def test_section_completes_basis(self, w):
        x0, basis = kernel_with_section(w)
        assert dot(w, x0) == 1
        # x0 plus a kernel basis is a basis of Z^n
        assert abs(int_det([x0, *basis])) == 1


class TestDIJ:
    LINES = [E1, E2, (1, 1, 1)]

    def test_examples(self):
        std = [E1, E2, E3]
        subsets = [set(s) for s in chain.from_iterable(combinations((1, 2, 3), k) for k in range(4))]
        assert all(d_IJ_sq(std, I, J) == 1 for I in subsets for J in subsets)
        assert all(d_IJ_sq(self.LINES, I, I) == 1 for I in subsets)
        assert d_IJ_sq(self.LINES, {1}, {3}) == Fraction(3, 2)

    def test_symmetry(self):
        subsets = [set(s) for s in chain.from_iterable(combinations((1, 2, 3), k) for k in range(4))]
        lines = [(1, 2, 0), (0, 1, 3), (1, 0, 1)]
        for I in subsets:
            for J in subsets:
                assert d_IJ_sq(lines, I, J) == d_IJ_sq(lines, J, I)

    def test_dependent(self):
        with pytest.raises(ValueError):
            d_IJ_sq([E1, E2, (1, 1, 0)], {1}, {2})


class TestDeterminants:
    @given(st.lists(st.lists(st.integers(-9, 9), min_size=4, max_size=4), min_size=4, max_size=4))
    def test_int_det_matches_numpy(self, m):
        assert int_det(m) == round(np.linalg.det(np.array(m, dtype=float)))

    def test_det3(self):
        assert det3(E1, E2, E3) == 1
        assert det3(E2, E1, E3) == -1

    @given(st.lists(st.integers(-30, 30), min_size=3, max_size=3),
           st.lists(st.integers(-30, 30), min_size=3, max_size=3))
    def test_lagrange_reduce_keeps_lattice(self, a, b):
        if wedge_sq_norm(a, b) == 0:
            return
        r1, r2 = lagrange_reduce(tuple(a), tuple(b))
        assert wedge_sq_norm(r1, r2) == wedge_sq_norm(a, b)
        assert sq_norm(r1) <= sq_norm(r2)
        assert 2 * abs(dot(r1, r2)) <= sq_norm(r1)
