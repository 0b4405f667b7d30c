from fractions import Fraction

import numpy as np
import pytest

from src.linalg.fields import PrimeField, RationalField
from src.linalg.sparse import SparseMatrix, eliminate, in_span, nullspace, rank, solve, span_rank

QQ = RationalField()


class TestSparseMatrix:
    def test_rejects_unsorted_entries(self):
        with pytest.raises(ValueError):
            SparseMatrix(2, 2, QQ, ((1, 0, 1), (0, 0, 1)))

    def test_rejects_explicit_zero(self):
        with pytest.raises(ValueError):
            SparseMatrix(1, 1, QQ, ((0, 0, 0),))

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            SparseMatrix(1, 1, QQ, ((0, 1, 1),))

    def test_from_dense_and_apply(self):
        matrix = SparseMatrix.from_dense([[1, 2], [0, 3]], QQ)
        assert matrix.apply({0: 1, 1: 1}) == {0: 3, 1: 3}
        assert matrix.rows() == [{0: 1, 1: 2}, {1: 3}]


class TestElimination:
    def test_rank_and_nullspace_over_q(self):
        matrix = SparseMatrix.from_dense([[1, 2, 3], [2, 4, 6], [1, 0, 1]], QQ)
        assert rank(matrix) == 2
        basis = nullspace(matrix)
        assert basis.dimension == 1
        assert basis.residuals_vanish(matrix)
        # primitive integer representative
        assert all(value.denominator == 1 for value in basis.vectors[0].values())

    def test_rational_rows(self):
        matrix = SparseMatrix.from_dense([[Fraction(1, 2), Fraction(1, 3)]], QQ)
        basis = nullspace(matrix)
        assert basis.dimension == 1
        assert basis.residuals_vanish(matrix)

    def test_rank_drops_mod_p(self):
        dense = [[1, 1], [1, 4]]
        assert rank(SparseMatrix.from_dense(dense, QQ)) == 2
        assert rank(SparseMatrix.from_dense(dense, PrimeField(3))) == 1

    def test_nullspace_mod_p(self):
        matrix = SparseMatrix.from_dense([[1, 1, 0], [0, 1, 1]], PrimeField(5))
        basis = nullspace(matrix)
        assert basis.dimension == 1
        assert basis.residuals_vanish(matrix)

    def test_column_order_does_not_change_rank(self):
        matrix = SparseMatrix.from_dense([[0, 1, 1], [1, 0, 1], [1, 1, 2]], QQ)
        assert eliminate(matrix, ordered=True).rank == eliminate(matrix, ordered=False).rank == 2

    def test_bad_column_order(self):
        with pytest.raises(ValueError):
            QQ.eliminator(3, [0, 0, 1])

    def test_incremental_rows(self):
        eliminator = QQ.eliminator(3)
        assert eliminator.add_row({0: 1, 1: 1})
        assert not eliminator.add_row({0: 2, 1: 2})
        assert eliminator.rows_seen == 2
        assert eliminator.nullity == 2


class TestSpan:
    def test_span_rank(self):
        assert span_rank([{0: 1}, {1: 1}, {0: 1, 1: 1}], 2) == 2

    def test_in_span(self):
        vectors = [{0: 1, 1: 1}, {2: 1}]
        assert in_span(vectors, {0: 3, 1: 3, 2: -1}, 3)
        assert not in_span(vectors, {0: 1}, 3)


class TestSolve:
    def test_consistent(self):
        matrix = SparseMatrix.from_dense([[1, 1], [1, -1]], QQ)
        assert solve(matrix, {0: 2, 1: 0}) == {0: 1, 1: 1}

    def test_inconsistent(self):
        matrix = SparseMatrix.from_dense([[1, 1], [2, 2]], QQ)
        assert solve(matrix, {0: 1, 1: 3}) is None


@pytest.mark.parametrize("prime", [2, 3, 101])
def test_rational_nullity_bounded_by_modular(prime):
    rng = np.random.default_rng(prime)
    for _ in range(40):
        nrows, ncols = rng.integers(1, 8, size=2).tolist()
        dense = rng.integers(-4, 5, size=(nrows, ncols)).tolist()
        rational = nullspace(SparseMatrix.from_dense(dense, QQ)).dimension
        modular = nullspace(SparseMatrix.from_dense(dense, PrimeField(prime))).dimension
        assert rational <= modular
