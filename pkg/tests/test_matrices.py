import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blowup_moduli.errors import ShapeMismatch
from blowup_moduli.matrices import (
    IntMatrix,
    MatrixC,
    commutator,
    determinant,
    eig2,
    integer_kernel_basis,
    integer_rank,
    inverse,
    kernel_basis,
    kernel_rank_over_Z,
    lattice_equal,
    mat_arith,
    rank,
    smith_normal_form,
    snf_invariants,
)
from blowup_moduli.scalars import QuadExtScalar, gaussian

small_ints = st.integers(min_value=-6, max_value=6)


def int_matrices(max_dim=5):
    return st.integers(1, max_dim).flatmap(
        lambda r: st.integers(1, max_dim).flatmap(
            lambda c: st.lists(
                st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r
            )
        )
    )


class TestMatrixC:
    def test_commutator_of_diagonals_vanishes(self):
        a = MatrixC.diag(1, 2)
        b = MatrixC.diag(3, 4)
        assert commutator(a, b).is_zero()

    def test_commutator_of_nilpotents(self):
        a = MatrixC([[0, 1], [0, 0]])
        b = MatrixC([[0, 0], [1, 0]])
        assert commutator(a, b) == MatrixC([[1, 0], [0, -1]])

    def test_identity_multiplication(self):
        m = MatrixC([[1, 2], [3, 4]])
        assert mat_arith("multiply", MatrixC.identity(2), m) == m

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            mat_arith("add", MatrixC.identity(2), MatrixC.zeros(2, 3))
        with pytest.raises(ShapeMismatch):
            mat_arith("multiply", MatrixC.zeros(2, 3), MatrixC.zeros(2, 3))

    def test_rank_and_kernel(self):
        m = MatrixC([[1, 2, 3], [2, 4, 6]])
        assert rank(m) == 1
        for v in kernel_basis(m):
            img = m * MatrixC.col_vector(v)
            assert img.is_zero()
        assert len(kernel_basis(m)) == 2

    def test_inverse(self):
        m = MatrixC([[1, 2], [3, Fraction(7)]])
        assert m * inverse(m) == MatrixC.identity(2)

    def test_blocks(self):
        m = MatrixC.from_blocks(
            [
                [MatrixC.identity(2), MatrixC.zeros(2, 1)],
                [MatrixC.zeros(1, 2), MatrixC([[5]])],
            ]
        )
        assert m == MatrixC([[1, 0, 0], [0, 1, 0], [0, 0, 5]])


class TestEig2:
    def test_diagonal(self):
        e = eig2(MatrixC.diag(0, 1))
        assert e.distinct and e.in_gaussians and e.diagonalizable
        assert {v.to_gaussian() for v in e.values} == {gaussian(0), gaussian(1)}

    def test_nilpotent_jordan_block(self):
        e = eig2(MatrixC([[0, 1], [0, 0]]))
        assert not e.distinct and not e.diagonalizable
        assert e.values[0].to_gaussian() == gaussian(0)
        assert len(e.vectors) == 1
        v = e.vectors[0]
        assert v[0] and not v[1]  # direction (1, 0)

    def test_sqrt_two_extension(self):
        e = eig2(MatrixC([[0, 2], [1, 0]]))
        assert e.distinct and not e.in_gaussians
        for lam in e.values:
            assert (lam * lam).to_gaussian() == gaussian(2)  # char poly t^2 - 2
        sqrt2 = QuadExtScalar.sqrt_of(gaussian(2))
        assert set(e.values) == {sqrt2, -sqrt2}

    def test_scalar_matrix_two_eigenvectors(self):
        e = eig2(MatrixC.diag(3, 3))
        assert e.diagonalizable and not e.distinct
        assert len(e.vectors) == 2

    @given(st.lists(small_ints, min_size=4, max_size=4))
    @settings(max_examples=60)
    def test_eigen_identity(self, entries):
        m = MatrixC([entries[:2], entries[2:]])
        e = eig2(m)
        for lam, v in zip(e.values, e.vectors):
            mv0 = m[0, 0] * v[0] + m[0, 1] * v[1]
            mv1 = m[1, 0] * v[0] + m[1, 1] * v[1]
            assert mv0 == lam * v[0]
            assert mv1 == lam * v[1]


class TestSmithNormalForm:
    def test_diag_2_3(self):
        snf = smith_normal_form([[2, 0], [0, 3]])
        assert snf.invariants == (1, 6)
        assert snf.rank == 2

    def test_zero_matrix(self):
        snf = smith_normal_form([[0, 0], [0, 0]])
        assert snf.invariants == ()
        assert snf.rank == 0

    def test_whitney_degree4_matrix(self):
        snf = smith_normal_form([[1, 0], [2, 1], [1, 0]])
        assert snf.invariants == (1, 1)
        assert snf.rank == 2

    @given(int_matrices())
    @settings(max_examples=80, deadline=None)
    def test_transforms_are_unimodular_and_diagonalise(self, rows):
        m = IntMatrix(rows)
        snf = smith_normal_form(m)
        u = snf.U.to_array()
        v = snf.V.to_array()
        prod = u @ m.to_array() @ v
        for i in range(prod.shape[0]):
            for j in range(prod.shape[1]):
                expect = snf.invariants[i] if i == j and i < snf.rank else 0
                assert prod[i, j] == expect
        assert determinant(u) in (1, -1)
        assert determinant(v) in (1, -1)
        for a, b in zip(snf.invariants, snf.invariants[1:]):
            assert b % a == 0 and a > 0

    def test_kernel_rank(self):
        assert kernel_rank_over_Z([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == (0, [])
        assert kernel_rank_over_Z([[1, -1]]) == (1, [])
        assert kernel_rank_over_Z([[2]]) == (0, [2])

    @given(int_matrices())
    @settings(max_examples=40, deadline=None)
    def test_kernel_basis_spans_kernel(self, rows):
        m = IntMatrix(rows)
        k = integer_kernel_basis(m)
        assert k.shape[1] == m.cols - integer_rank(m)
        if k.size:
            prod = m.to_array() @ k
            assert not (prod != 0).any()

    def test_lattice_equality(self):
        assert lattice_equal([[2, 0], [0, 2]], [[2, 2], [0, 2]])
        assert not lattice_equal([[2, 0], [0, 2]], [[1, 0], [0, 2]])

    def test_snf_invariants_torsion(self):
        assert snf_invariants([[2, 0], [0, 4]]) == [2, 4]


class TestSmithStress:
    def test_larger_random_matrices(self):
        rng = random.Random(99)
        for _ in range(12):
            rows = rng.randint(5, 9)
            cols = rng.randint(5, 12)
            m = IntMatrix(
                [[rng.randint(-30, 30) for _ in range(cols)] for _ in range(rows)]
            )
            snf = smith_normal_form(m)
            u = snf.U.to_array()
            v = snf.V.to_array()
            prod = u @ m.to_array() @ v
            for i in range(rows):
                for j in range(cols):
                    expect = snf.invariants[i] if i == j and i < snf.rank else 0
                    assert prod[i, j] == expect
            assert determinant(u) in (1, -1)
            assert determinant(v) in (1, -1)
            for a, b in zip(snf.invariants, snf.invariants[1:]):
                assert a > 0 and b % a == 0

    def test_rank_matches_rational_rank(self):
        from fractions import Fraction

        from blowup_moduli.matrices import rank as field_rank

        rng = random.Random(100)
        for _ in range(15):
            rows = rng.randint(2, 6)
            cols = rng.randint(2, 6)
            entries = [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)]
            over_q = MatrixC([[Fraction(x) for x in row] for row in entries])
            assert integer_rank(IntMatrix(entries)) == field_rank(over_q)
