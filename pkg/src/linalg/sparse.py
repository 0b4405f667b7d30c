import logging
import math
from abc import ABC, abstractmethod
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from src.linalg.fields import Field, Number, RationalField

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SparseMatrix:
    """
    Immutable sparse matrix over a Field.

    Entries are stored as sorted (row, col, value) triples without zeros
    or duplicates, so two matrices with the same content compare equal.
    """

    nrows: int
    ncols: int
    field: Field
    entries: tuple[tuple[int, int, Number], ...] = ()

    def __post_init__(self) -> None:
        previous = None
        for row, col, value in self.entries:
            if not (0 <= row < self.nrows and 0 <= col < self.ncols):
                raise ValueError(f"Entry ({row}, {col}) outside a {self.nrows}x{self.ncols} matrix")
            if value == 0:
                raise ValueError(f"Explicit zero stored at ({row}, {col})")
            if previous is not None and (row, col) <= previous:
                raise ValueError("Entries must be sorted and free of duplicates")
            previous = (row, col)

    @classmethod
    def from_rows(
        cls, rows: Sequence[Mapping[int, Number]], ncols: int, field: Field
    ) -> "SparseMatrix":
        entries = []
        for index, row in enumerate(rows):
            for col in sorted(row):
                value = field.element(row[col])
                if value:
                    entries.append((index, col, value))
        return cls(len(rows), ncols, field, tuple(entries))

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[Number]], field: Field) -> "SparseMatrix":
        ncols = len(dense[0]) if dense else 0
        rows = [{col: value for col, value in enumerate(line) if value} for line in dense]
        return cls.from_rows(rows, ncols, field)

    def rows(self) -> list[dict[int, Number]]:
        rows: list[dict[int, Number]] = [{} for _ in range(self.nrows)]
        for row, col, value in self.entries:
            rows[row][col] = value
        return rows

    def column_counts(self) -> Counter:
        return Counter(col for _, col, _ in self.entries)

    def apply(self, vector: Mapping[int, Number]) -> dict[int, Number]:
        """
        Return M·v as a sparse dict, computed in the matrix's field.
        """
        result: dict[int, Number] = {}
        for row, col, value in self.entries:
            if col in vector:
                result[row] = result.get(row, 0) + value * vector[col]
        cleaned = {}
        for row, value in result.items():
            value = self.field.element(value)
            if value:
                cleaned[row] = value
        return cleaned


@dataclass(frozen=True)
class NullspaceBasis:
    """
    Basis of {v : M v = 0}, one sparse dict per vector.
    """

    vectors: tuple[dict[int, Number], ...]
    field: Field
    ncols: int = 0

    @property
    def dimension(self) -> int:
        return len(self.vectors)

    def residuals_vanish(self, matrix: SparseMatrix) -> bool:
        return all(not matrix.apply(vector) for vector in self.vectors)


class Eliminator(ABC):
    """
    Incremental row-echelon elimination over a Field.

    Rows are streamed in one at a time; each pivot row keeps its pivot
    column as its smallest column, so reduction of a new row only ever
    walks forward. Dependent rows are discarded as soon as they reduce
    to zero.
    """

    def __init__(self, ncols: int, field: Field, column_order: Sequence[int] | None = None) -> None:
        self.ncols = ncols
        self.field = field
        self.rows_seen = 0
        self._pivots: dict[int, dict[int, int]] = {}
        if column_order is None:
            self._internal = None
            self._external = None
        else:
            if sorted(column_order) != list(range(ncols)):
                raise ValueError("column_order must be a permutation of the columns")
            self._external = list(column_order)
            self._internal = {col: position for position, col in enumerate(column_order)}

    @property
    def rank(self) -> int:
        return len(self._pivots)

    @property
    def nullity(self) -> int:
        return self.ncols - self.rank

    def add_row(self, row: Mapping[int, Number]) -> bool:
        """
        Feed one row. Returns True when it raised the rank.
        """
        self.rows_seen += 1
        reduced = self._reduce(self._to_internal(self.field.prepare_row(row)))
        if not reduced:
            return False
        lead = min(reduced)
        self._pivots[lead] = self._normalize(reduced, lead)
        return True

    def add_rows(self, rows: Iterable[Mapping[int, Number]]) -> int:
        added = 0
        for row in rows:
            if self.add_row(row):
                added += 1
        return added

    def contains(self, row: Mapping[int, Number]) -> bool:
        """
        Whether the row lies in the span of the rows fed so far.
        """
        return not self._reduce(self._to_internal(self.field.prepare_row(row)))

    def nullspace(self) -> NullspaceBasis:
        vectors = []
        for free in self._free_columns():
            vector = self._back_substitute({free: 1})
            vectors.append(self._to_external(self._finish_vector(vector)))
        return NullspaceBasis(tuple(vectors), self.field, self.ncols)

    def particular_solution(self, augmented_col: int) -> dict[int, Number] | None:
        """
        Solve M x = b for a system fed as rows [M | b] with b in augmented_col.

        Returns None when the system is inconsistent. Free variables are set
        to zero, so the answer is deterministic.
        """
        internal_aug = self._internal[augmented_col] if self._internal else augmented_col
        if internal_aug in self._pivots:
            return None
        vector = self._back_substitute({internal_aug: -1})
        solution = self._to_external(vector)
        solution.pop(augmented_col, None)
        return {col: self.field.element(value) for col, value in solution.items() if value}

    def _free_columns(self) -> list[int]:
        return [col for col in range(self.ncols) if col not in self._pivots]

    def _to_internal(self, row: dict[int, int]) -> dict[int, int]:
        if self._internal is None:
            return row
        return {self._internal[col]: value for col, value in row.items()}

    def _to_external(self, vector: dict[int, Number]) -> dict[int, Number]:
        if self._external is None:
            return dict(vector)
        return {self._external[col]: value for col, value in vector.items()}

    @abstractmethod
    def _reduce(self, row: dict[int, int]) -> dict[int, int]:
        pass

    @abstractmethod
    def _normalize(self, row: dict[int, int], lead: int) -> dict[int, int]:
        pass

    @abstractmethod
    def _back_substitute(self, assignments: dict[int, Number]) -> dict[int, Number]:
        pass

    @abstractmethod
    def _finish_vector(self, vector: dict[int, Number]) -> dict[int, Number]:
        pass


class RationalEliminator(Eliminator):
    """
    Fraction-free elimination over ℚ on primitive integer rows.
    """

    def _reduce(self, row: dict[int, int]) -> dict[int, int]:
        pivots = self._pivots
        row = dict(row)
        while row:
            lead = min(row)
            pivot = pivots.get(lead)
            if pivot is None:
                break
            a = pivot[lead]
            b = row[lead]
            g = math.gcd(a, b)
            scale_row, scale_pivot = a // g, b // g
            reduced = {col: value * scale_row for col, value in row.items() if col != lead}
            for col, value in pivot.items():
                if col == lead:
                    continue
                updated = reduced.get(col, 0) - scale_pivot * value
                if updated:
                    reduced[col] = updated
                else:
                    reduced.pop(col, None)
            if reduced:
                content = math.gcd(*reduced.values())
                if content > 1:
                    reduced = {col: value // content for col, value in reduced.items()}
            row = reduced
        return row

    def _normalize(self, row: dict[int, int], lead: int) -> dict[int, int]:
        if row[lead] < 0:
            return {col: -value for col, value in row.items()}
        return row

    def _back_substitute(self, assignments: dict[int, Number]) -> dict[int, Number]:
        vector: dict[int, Number] = {col: Fraction(value) for col, value in assignments.items()}
        for lead in sorted(self._pivots, reverse=True):
            pivot = self._pivots[lead]
            total = Fraction(0)
            for col, value in pivot.items():
                if col != lead and col in vector:
                    total += value * vector[col]
            if total:
                vector[lead] = -total / pivot[lead]
        return {col: value for col, value in vector.items() if value}

    def _finish_vector(self, vector: dict[int, Number]) -> dict[int, Number]:
        # scale to a primitive integer vector for reproducible output
        scale = math.lcm(*(value.denominator for value in vector.values()))
        integral = {col: int(value * scale) for col, value in vector.items()}
        content = math.gcd(*integral.values())
        return {col: Fraction(value // content) for col, value in integral.items()}


class ModularEliminator(Eliminator):
    """
    Elimination over F_p with monic pivot rows.
    """

    def _reduce(self, row: dict[int, int]) -> dict[int, int]:
        p = self.field.modulus
        pivots = self._pivots
        row = dict(row)
        while row:
            lead = min(row)
            pivot = pivots.get(lead)
            if pivot is None:
                break
            factor = row.pop(lead)
            for col, value in pivot.items():
                if col == lead:
                    continue
                updated = (row.get(col, 0) - factor * value) % p
                if updated:
                    row[col] = updated
                else:
                    row.pop(col, None)
        return row

    def _normalize(self, row: dict[int, int], lead: int) -> dict[int, int]:
        p = self.field.modulus
        inverse = pow(row[lead], -1, p)
        return {col: value * inverse % p for col, value in row.items()}

    def _back_substitute(self, assignments: dict[int, Number]) -> dict[int, Number]:
        p = self.field.modulus
        vector: dict[int, Number] = {col: value % p for col, value in assignments.items()}
        for lead in sorted(self._pivots, reverse=True):
            pivot = self._pivots[lead]
            total = 0
            for col, value in pivot.items():
                if col != lead and col in vector:
                    total += value * vector[col]
            total %= p
            if total:
                vector[lead] = -total % p
        return {col: value for col, value in vector.items() if value}

    def _finish_vector(self, vector: dict[int, Number]) -> dict[int, Number]:
        return vector


def markowitz_order(matrix: SparseMatrix) -> list[int]:
    """
    Static column ordering: sparsest columns first, ties broken by index.
    """
    counts = matrix.column_counts()
    return sorted(range(matrix.ncols), key=lambda col: (counts.get(col, 0), col))


def eliminate(matrix: SparseMatrix, ordered: bool = True) -> Eliminator:
    order = markowitz_order(matrix) if ordered else None
    eliminator = matrix.field.eliminator(matrix.ncols, order)
    eliminator.add_rows(matrix.rows())
    logger.debug(
        "Eliminated %dx%d matrix over %s: rank %d",
        matrix.nrows,
        matrix.ncols,
        matrix.field,
        eliminator.rank,
    )
    return eliminator


def nullspace(matrix: SparseMatrix) -> NullspaceBasis:
    """
    Exact basis of the right kernel of the matrix.
    """
    return eliminate(matrix).nullspace()


def rank(matrix: SparseMatrix) -> int:
    return eliminate(matrix).rank


def span_rank(vectors: Iterable[Mapping[int, Number]], ncols: int, field: Field | None = None) -> int:
    field = field or RationalField()
    eliminator = field.eliminator(ncols)
    eliminator.add_rows(vectors)
    return eliminator.rank


def in_span(
    vectors: Iterable[Mapping[int, Number]],
    vector: Mapping[int, Number],
    ncols: int,
    field: Field | None = None,
) -> bool:
    """
    Decide whether vector is a linear combination of vectors.
    """
    field = field or RationalField()
    eliminator = field.eliminator(ncols)
    eliminator.add_rows(vectors)
    return eliminator.contains(vector)


def solve(matrix: SparseMatrix, rhs: Mapping[int, Number]) -> dict[int, Number] | None:
    """
    One solution x of M x = rhs, or None when the system is inconsistent.
    """
    augmented = matrix.ncols
    eliminator = matrix.field.eliminator(matrix.ncols + 1)
    rows = matrix.rows()
    for index, row in enumerate(rows):
        extended = dict(row)
        if index in rhs and rhs[index]:
            extended[augmented] = rhs[index]
        eliminator.add_row(extended)
    for index, value in rhs.items():
        if value and index >= len(rows):
            return None
    return eliminator.particular_solution(augmented)
