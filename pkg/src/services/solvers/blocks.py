import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterator

from src.algebra.superfields import AlgebraTable, Weight, WeightCodec
from src.linalg.fields import Field, RationalField
from src.linalg.sparse import SparseMatrix
from src.utils.exceptions import TableConstructionError

logger = logging.getLogger(__name__)

Triple = tuple[int, int, int]
Row = dict[int, int]


@dataclass
class BlockSystem:
    """
    Unknowns of one (parity, weight, degree) block: f(e_a, e_b) has
    coefficient u(a, b, k) on e_k for every admissible triple listed.
    """

    parity: int
    weight_code: int
    degree: int
    unknowns: list[Triple]
    index: dict[Triple, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.index:
            self.index = {triple: col for col, triple in enumerate(self.unknowns)}

    @property
    def size(self) -> int:
        return len(self.unknowns)


class BiderAssembler:
    """
    Row generator for the two one-sided derivation identities of a
    biderivation f of parity γ:

        f([x,y], z) = (−1)^{|x|γ} [x, f(y,z)] + (−1)^{|y||z|} [f(x,z), y]
        f(x, [y,z]) = [f(x,y), z] + (−1)^{(γ+|x|)|y|} [y, f(x,z)]

    Every row for (x, y, z, m) touches unknowns of exactly one block, the
    one with weight w(m) − w(x) − w(y) − w(z) and the matching degree.
    """

    def __init__(self, table: AlgebraTable, parity: int) -> None:
        self.table = table
        self.parity = parity % 2
        self.codec = WeightCodec(table.weights, spread=4)
        self._code = [self.codec.encode(weight) for weight in table.weights]
        self._logger = logging.getLogger(__name__)
        self._pairs: dict[tuple[int, int, int], list[tuple[int, int]]] | None = None
        self._counts: tuple[list[int], list[int]] | None = None

    def block_key(self, weight_code: int, degree: int) -> tuple[int, int]:
        return weight_code, self.table.degree_key(degree)

    def weight_of(self, code: int) -> Weight:
        return self.codec.decode(code)

    def enumerate_blocks(self) -> list[BlockSystem]:
        """
        Group admissible triples (a, b, k) with |e_k| = |e_a| + |e_b| + γ by
        (w(k) − w(a) − w(b), deg(k) − deg(a) − deg(b)); empty blocks never appear.
        """
        table = self.table
        P, D, code = table.parity, table.zdegree, self._code
        grouped: dict[tuple[int, int], list[Triple]] = defaultdict(list)
        by_parity = [[k for k in range(table.dim) if P[k] == q] for q in (0, 1)]
        for a in range(table.dim):
            for b in range(table.dim):
                base_code = code[a] + code[b]
                base_degree = D[a] + D[b]
                for k in by_parity[(P[a] + P[b] + self.parity) % 2]:
                    grouped[self.block_key(code[k] - base_code, D[k] - base_degree)].append((a, b, k))

        blocks = [
            BlockSystem(self.parity, weight_code, degree, triples)
            for (weight_code, degree), triples in grouped.items()
        ]
        blocks.sort(key=lambda block: (block.degree, self.weight_of(block.weight_code).coords))
        self._logger.debug(
            "%s: %d blocks of parity %d over %d unknowns",
            table.family,
            len(blocks),
            self.parity,
            sum(block.size for block in blocks),
        )
        return blocks

    def _pair_index(self) -> dict[tuple[int, int, int], list[tuple[int, int]]]:
        if self._pairs is None:
            table = self.table
            P, D, code = table.parity, table.zdegree, self._code
            pairs: dict[tuple[int, int, int], list[tuple[int, int]]] = defaultdict(list)
            for x in range(table.dim):
                for y in range(table.dim):
                    key = (code[x] + code[y], table.degree_key(D[x] + D[y]), (P[x] + P[y]) % 2)
                    pairs[key].append((x, y))
            self._pairs = dict(pairs)
        return self._pairs

    def _occurrences(self) -> tuple[list[int], list[int]]:
        if self._counts is None:
            image = [0] * self.table.dim
            acting = [0] * self.table.dim
            for (x, y), coefficients in self.table.structure.items():
                for k in coefficients:
                    image[k] += 1
                acting[x] += len(coefficients)
                acting[y] += len(coefficients)
            self._counts = (image, acting)
        return self._counts

    def column_order(self, block: BlockSystem) -> list[int]:
        """
        Markowitz-style static order of the block's columns, sparsest first.

        Rows are streamed, so the column counts are estimated from the
        structure constants: u(a, b, k) enters through brackets landing on
        e_a or e_b and through every constant that has e_k as an argument.
        """
        image, acting = self._occurrences()
        counts = [image[a] + image[b] + 2 * acting[k] for a, b, k in block.unknowns]
        return sorted(range(block.size), key=lambda col: (counts[col], col))

    def row_keys(self, block: BlockSystem) -> list[tuple[int, int, int, int]]:
        """
        All (x, y, z, m) whose rows belong to the block, in lexicographic order.
        """
        table = self.table
        P, D, code = table.parity, table.zdegree, self._code
        pairs = self._pair_index()
        keys = []
        for z in range(table.dim):
            for m in range(table.dim):
                target = (
                    code[m] - code[z] - block.weight_code,
                    table.degree_key(D[m] - D[z] - block.degree),
                    (P[m] - P[z] - self.parity) % 2,
                )
                for x, y in pairs.get(target, ()):
                    keys.append((x, y, z, m))
        keys.sort()
        return keys

    def rows(self, block: BlockSystem) -> Iterator[Row]:
        """
        Stream nonzero rows of the block: for each (x, y, z, m) the first
        identity's row, then the second's.
        """
        for x, y, z, m in self.row_keys(block):
            first = self.first_identity_row(block, x, y, z, m)
            if first:
                yield first
            second = self.second_identity_row(block, x, y, z, m)
            if second:
                yield second

    def _column(self, block: BlockSystem, triple: Triple) -> int:
        try:
            return block.index[triple]
        except KeyError:
            raise TableConstructionError(
                f"Unknown {triple} falls outside its block: the table violates its gradings",
                pair=triple[:2],
            ) from None

    def first_identity_row(self, block: BlockSystem, x: int, y: int, z: int, m: int) -> Row:
        table = self.table
        P, gamma = table.parity, self.parity
        row: Row = {}

        def add(triple: Triple, value) -> None:
            col = self._column(block, triple)
            updated = row.get(col, 0) + value
            if updated:
                row[col] = updated
            else:
                row.pop(col, None)

        for k, c in table.constants(x, y).items():
            add((k, z, m), c)
        sign = 1 if (P[x] * gamma) % 2 else -1
        for j, c in table.left_into.get((x, m), ()):
            add((y, z, j), sign * c)
        sign = 1 if P[y] and P[z] else -1
        for j, c in table.right_into.get((y, m), ()):
            add((x, z, j), sign * c)
        return row

    def second_identity_row(self, block: BlockSystem, x: int, y: int, z: int, m: int) -> Row:
        table = self.table
        P, gamma = table.parity, self.parity
        row: Row = {}

        def add(triple: Triple, value) -> None:
            col = self._column(block, triple)
            updated = row.get(col, 0) + value
            if updated:
                row[col] = updated
            else:
                row.pop(col, None)

        for k, c in table.constants(y, z).items():
            add((x, k, m), c)
        for j, c in table.right_into.get((z, m), ()):
            add((x, y, j), -c)
        sign = 1 if ((gamma + P[x]) * P[y]) % 2 else -1
        for j, c in table.left_into.get((y, m), ()):
            add((x, z, j), sign * c)
        return row

    def bracket_vector(self, block: BlockSystem, scale: int = 1) -> dict[int, int]:
        """
        λ·[ , ] restricted to the block's unknowns.
        """
        vector = {}
        for (a, b), coefficients in self.table.structure.items():
            for k, c in coefficients.items():
                col = block.index.get((a, b, k))
                if col is not None:
                    vector[col] = scale * c
        return vector

    def find_block(self, blocks: list[BlockSystem], weight: Weight, degree: int) -> BlockSystem | None:
        key = self.block_key(self.codec.encode(weight), degree)
        for block in blocks:
            if (block.weight_code, block.degree) == key:
                return block
        return None


def assemble_block(
    table: AlgebraTable, parity: int, weight: Weight, degree: int, field: Field | None = None
) -> tuple[SparseMatrix, list[Triple]]:
    """
    The full (unstreamed) matrix of one block, with its unknown triples.
    """
    assembler = BiderAssembler(table, parity)
    block = assembler.find_block(assembler.enumerate_blocks(), weight, degree)
    if block is None:
        return SparseMatrix(0, 0, field or RationalField()), []
    rows = list(assembler.rows(block))
    return SparseMatrix.from_rows(rows, block.size, field or RationalField()), block.unknowns


def assemble_global(table: AlgebraTable, parity: int, field: Field | None = None) -> tuple[SparseMatrix, list[Triple]]:
    """
    The un-blocked system over all admissible triples, for small tables.
    """
    assembler = BiderAssembler(table, parity)
    blocks = assembler.enumerate_blocks()
    unknowns = sorted(triple for block in blocks for triple in block.unknowns)
    everything = BlockSystem(parity % 2, 0, 0, unknowns)
    P, D = table.parity, table.zdegree
    rows: list[Row] = []
    for x in range(table.dim):
        for y in range(table.dim):
            for z in range(table.dim):
                for m in range(table.dim):
                    if P[m] != (P[x] + P[y] + P[z] + parity) % 2:
                        continue
                    for row in (
                        assembler.first_identity_row(everything, x, y, z, m),
                        assembler.second_identity_row(everything, x, y, z, m),
                    ):
                        if row:
                            rows.append(row)
    return SparseMatrix.from_rows(rows, len(unknowns), field or RationalField()), unknowns


def skew_audit(matrix: SparseMatrix, unknowns: list[Triple]) -> list[int]:
    """
    Rows that merely relate f(x, y) to ±f(y, x); an honest system has none.
    """
    offending = []
    for index, row in enumerate(matrix.rows()):
        if len(row) != 2:
            continue
        first, second = (unknowns[col] for col in row)
        if first[0] == second[1] and first[1] == second[0] and first[2] == second[2] and first != second:
            offending.append(index)
    return offending
