"""Polynomial-matrix layer: arithmetic, determinant, rank, Smith form, inversion."""

import random
from fractions import Fraction

import pytest

from agverify.polyalg import ONE, S, ZERO, RatFunc
from agverify.polymatrix import (
    DimensionError,
    PolyMatrix,
    RatMatrix,
    SingularMatrixError,
    block,
    determinant,
    hstack,
    invert_ratmatrix,
    is_proper,
    is_unimodular,
    rank_generic,
    smith_form,
    vstack,
)
from support import det_cofactor, random_matrix, random_unimodular


class TestArithmetic:
    def test_identity_multiplication(self):
        X = PolyMatrix([[S, 1], [2, S**2]])
        assert PolyMatrix.identity(2) * X == X

    def test_vstack(self):
        v = vstack(PolyMatrix([[S]]), PolyMatrix([[S**2]]))
        assert v == PolyMatrix([[S], [S**2]])

    def test_mul_by_zero(self):
        A = PolyMatrix([[S, 1], [0, S]])
        assert A * PolyMatrix.zeros(2, 3) == PolyMatrix.zeros(2, 3)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            PolyMatrix([[S]]) + PolyMatrix([[S, 1]])
        with pytest.raises(DimensionError):
            PolyMatrix([[S, 1]]) * PolyMatrix([[S, 1]])

    def test_ragged_rows_rejected(self):
        with pytest.raises(DimensionError):
            PolyMatrix([[S], [S, 1]])

    def test_zero_row_matrix_needs_cols(self):
        m = PolyMatrix([], cols=3)
        assert (m.rows, m.cols) == (0, 3)

    def test_block_compose(self):
        I = PolyMatrix.identity(1)
        b = block([[I, I], [PolyMatrix([[S]]), PolyMatrix.zeros(1, 1)]])
        assert b == PolyMatrix([[1, 1], [S, 0]])

    def test_transpose(self):
        assert PolyMatrix([[S, 1]]).transpose() == PolyMatrix([[S], [1]])

    def test_scalar_product(self):
        assert S * PolyMatrix.identity(2) == PolyMatrix.diag([S, S])


class TestDeterminant:
    def test_triangular(self):
        assert determinant(PolyMatrix([[S, 1], [0, S]])) == S**2

    def test_identity(self):
        assert determinant(PolyMatrix.identity(3)) == ONE

    def test_non_square(self):
        with pytest.raises(DimensionError):
            determinant(PolyMatrix([[S, 1]]))

    def test_matches_cofactor_oracle(self):
        rng = random.Random(101)
        for _ in range(40):
            n = rng.randint(1, 3)
            M = random_matrix(rng, n, n, max_deg=2)
            assert determinant(M) == det_cofactor(M)

    def test_empty(self):
        assert determinant(PolyMatrix([], cols=0)) == ONE


class TestRank:
    def test_dependent_rows(self):
        assert rank_generic(PolyMatrix([[S, 0], [S**2, 0]])) == 1

    def test_identity(self):
        assert rank_generic(PolyMatrix.identity(4)) == 4

    def test_constructed_rank(self):
        rng = random.Random(7)
        for _ in range(15):
            n = rng.randint(2, 3)
            r = rng.randint(0, n)
            U = random_unimodular(rng, n)
            V = random_unimodular(rng, n)
            D = PolyMatrix.diag([S + k for k in range(n)])
            mask = PolyMatrix.diag([1 if i < r else 0 for i in range(n)])
            assert rank_generic(U * (D * mask) * V) == r

    def test_matches_numeric_rank_at_sample_points(self):
        # The rank at any evaluation point never exceeds the generic rank and
        # equals it away from a finite bad set, so sampling must reach it.
        from support import eval_matrix, fraction_rank

        rng = random.Random(23)
        for _ in range(10):
            M = random_matrix(rng, rng.randint(1, 3), rng.randint(1, 3), 2)
            want = rank_generic(M)
            hits = 0
            for _ in range(40):
                x = Fraction(rng.randint(-20, 20), rng.randint(1, 7))
                got = fraction_rank(eval_matrix(M, x))
                assert got <= want
                if got == want:
                    hits += 1
                    if hits == 5:
                        break
            assert hits == 5


class TestUnimodular:
    def test_shear(self):
        assert is_unimodular(PolyMatrix([[1, S], [0, 1]]))

    def test_scalar_s(self):
        assert not is_unimodular(PolyMatrix([[S]]))

    def test_smith_factors_are_unimodular(self):
        rng = random.Random(53)
        for _ in range(20):
            M = random_matrix(rng, rng.randint(1, 3), rng.randint(1, 3), 2)
            sd = smith_form(M)
            assert is_unimodular(sd.U) and is_unimodular(sd.V)


class TestSmith:
    def test_diagonal_reordering(self):
        # gcd of 1x1 minors is s, product of 2x2 minors gives s^3: chain [s, s^2].
        sd = smith_form(PolyMatrix([[S**2, 0], [0, S]]))
        assert sd.invariant_factors == (S, S**2)

    def test_zero_matrix(self):
        sd = smith_form(PolyMatrix.zeros(2, 3))
        assert sd.invariant_factors == ()
        assert sd.rank == 0
        assert sd.reconstruct() == PolyMatrix.zeros(2, 3)

    def test_coprime_row(self):
        # Quarter-car body row with unit parameters: entries are coprime.
        sd = smith_form(PolyMatrix([[S**2 + S + 1, -S - 1]]))
        assert sd.invariant_factors == (ONE,)

    def test_empty_matrix(self):
        sd = smith_form(PolyMatrix([], cols=2))
        assert sd.rank == 0 and sd.V == PolyMatrix.identity(2)

    def test_inverse_tracking(self):
        rng = random.Random(11)
        for _ in range(25):
            m, n = rng.randint(1, 4), rng.randint(1, 4)
            M = random_matrix(rng, m, n, 2)
            sd = smith_form(M)
            assert sd.U * sd.U_inv == PolyMatrix.identity(m)
            assert sd.V * sd.V_inv == PolyMatrix.identity(n)

    def test_reconstruction_and_chain(self):
        rng = random.Random(29)
        for _ in range(60):
            m, n = rng.randint(1, 4), rng.randint(1, 4)
            M = random_matrix(rng, m, n, 3)
            sd = smith_form(M)
            assert sd.reconstruct() == M
            for a, b in zip(sd.invariant_factors, sd.invariant_factors[1:]):
                assert (b % a).is_zero

    def test_minor_gcd_oracle(self):
        # d_1 * ... * d_k equals the monic gcd of all k x k minors.
        from itertools import combinations

        from agverify.polyalg import poly_gcd

        rng = random.Random(97)
        for _ in range(20):
            m, n = rng.randint(1, 3), rng.randint(1, 3)
            M = random_matrix(rng, m, n, 2)
            sd = smith_form(M)
            for k in range(1, sd.rank + 1):
                minors = [
                    det_cofactor(M.take_rows(rsel).take_cols(csel))
                    for rsel in combinations(range(m), k)
                    for csel in combinations(range(n), k)
                ]
                g = None
                for minor in minors:
                    if not minor.is_zero:
                        g = minor if g is None else poly_gcd(g, minor)
                assert g is not None
                product = ONE
                for d in sd.invariant_factors[:k]:
                    product = product * d
                assert product == g.monic()


class TestInversion:
    def test_scalar(self):
        inv = invert_ratmatrix(PolyMatrix([[S]]))
        assert inv == RatMatrix([[RatFunc(ONE, S)]])

    def test_identity(self):
        assert invert_ratmatrix(PolyMatrix.identity(3)) == RatMatrix.identity(3)

    def test_singular(self):
        with pytest.raises(SingularMatrixError):
            invert_ratmatrix(PolyMatrix([[S, S], [S, S]]))

    def test_non_square(self):
        with pytest.raises(DimensionError):
            invert_ratmatrix(PolyMatrix([[S, 1]]))

    def test_random_unimodular_roundtrip(self):
        rng = random.Random(3)
        for _ in range(15):
            n = rng.randint(1, 3)
            U = random_unimodular(rng, n)
            assert invert_ratmatrix(U) * U == RatMatrix.identity(n)

    def test_general_inverse(self):
        rng = random.Random(5)
        count = 0
        while count < 10:
            n = rng.randint(1, 3)
            M = random_matrix(rng, n, n, 2)
            if determinant(M).is_zero:
                continue
            assert (invert_ratmatrix(M) * M) == RatMatrix.identity(n)
            count += 1


class TestProper:
    def test_integrator(self):
        assert is_proper(PolyMatrix([[S]]), PolyMatrix([[ONE]]))

    def test_differentiator(self):
        assert not is_proper(PolyMatrix([[ONE]]), PolyMatrix([[S]]))

    def test_singular_p(self):
        with pytest.raises(SingularMatrixError):
            is_proper(PolyMatrix([[ZERO]]), PolyMatrix([[ONE]]))

    def test_hstack_shapes(self):
        h = hstack(PolyMatrix.identity(2), PolyMatrix.zeros(2, 1))
        assert (h.rows, h.cols) == (2, 3)


def test_smith_decomposition_rejects_broken_chain():
    from agverify.polymatrix import SmithDecomposition

    with pytest.raises(ValueError):
        SmithDecomposition(
            U=PolyMatrix.identity(2),
            V=PolyMatrix.identity(2),
            invariant_factors=(S**2, S),
            rank=2,
            U_inv=PolyMatrix.identity(2),
            V_inv=PolyMatrix.identity(2),
        )
