from src.algebra.superfields import Weight
from src.linalg.fields import RationalField
from src.linalg.sparse import SparseMatrix, nullspace
from src.services.solvers.bidersolve import solve_bder
from src.services.solvers.blocks import BiderAssembler, assemble_block, assemble_global, skew_audit


def admissible_triples(table, parity):
    P = table.parity
    return {
        (a, b, k)
        for a in range(table.dim)
        for b in range(table.dim)
        for k in range(table.dim)
        if P[k] == (P[a] + P[b] + parity) % 2
    }


class TestBlockEnumeration:
    def test_blocks_partition_the_unknowns(self, w2):
        for parity in (0, 1):
            blocks = BiderAssembler(w2, parity).enumerate_blocks()
            triples = [triple for block in blocks for triple in block.unknowns]
            assert len(triples) == len(set(triples))
            assert set(triples) == admissible_triples(w2, parity)

    def test_bracket_sits_on_the_inner_line(self, sl2):
        assembler = BiderAssembler(sl2, 0)
        blocks = assembler.enumerate_blocks()
        inner = assembler.find_block(blocks, Weight((0,)), 0)
        assert inner is not None
        assert len(assembler.bracket_vector(inner)) == sum(len(c) for c in sl2.structure.values())

    def test_no_odd_blocks_without_odd_elements(self, sl2):
        assert BiderAssembler(sl2, 1).enumerate_blocks() == []

    def test_missing_block(self, sl2):
        matrix, unknowns = assemble_block(sl2, 0, Weight((8,)), 0)
        assert matrix.nrows == 0
        assert unknowns == []


class TestRows:
    def test_rows_stay_inside_their_block(self, w2):
        assembler = BiderAssembler(w2, 1)
        for block in assembler.enumerate_blocks():
            for row in assembler.rows(block):
                assert all(0 <= col < block.size for col in row)

    def test_bracket_solves_every_block_row(self, sl2):
        assembler = BiderAssembler(sl2, 0)
        for block in assembler.enumerate_blocks():
            vector = assembler.bracket_vector(block)
            for row in assembler.rows(block):
                assert sum(value * vector.get(col, 0) for col, value in row.items()) == 0

    def test_honest_rows_pass_the_skew_audit(self, w2):
        matrix, unknowns = assemble_global(w2, 0)
        assert skew_audit(matrix, unknowns) == []

    def test_skew_audit_flags_symmetrizing_rows(self):
        unknowns = [(0, 1, 2), (1, 0, 2), (0, 0, 2)]
        matrix = SparseMatrix.from_rows([{0: 1, 1: 1}, {0: 1, 2: 1}], 3, RationalField())
        assert skew_audit(matrix, unknowns) == [0]


def test_blocked_nullity_matches_global_system(w2):
    for parity in (0, 1):
        matrix, unknowns = assemble_global(w2, parity)
        assert solve_bder(w2, parity).total == nullspace(matrix).dimension
        assert len(unknowns) == matrix.ncols


class TestColumnOrder:
    def test_order_is_a_permutation(self, w2):
        for parity in (0, 1):
            assembler = BiderAssembler(w2, parity)
            for block in assembler.enumerate_blocks():
                assert sorted(assembler.column_order(block)) == list(range(block.size))

    def test_sparse_columns_come_first(self, sl2):
        assembler = BiderAssembler(sl2, 0)
        block = assembler.find_block(assembler.enumerate_blocks(), Weight((0,)), 0)
        image, acting = assembler._occurrences()
        counts = [image[a] + image[b] + 2 * acting[k] for a, b, k in block.unknowns]
        assert [counts[col] for col in assembler.column_order(block)] == sorted(counts)

    def test_order_does_not_change_the_nullity(self, w2):
        assembler = BiderAssembler(w2, 0)
        for block in assembler.enumerate_blocks():
            natural = RationalField().eliminator(block.size)
            ordered = RationalField().eliminator(block.size, assembler.column_order(block))
            for row in assembler.rows(block):
                natural.add_row(row)
                ordered.add_row(row)
            assert natural.rank == ordered.rank
