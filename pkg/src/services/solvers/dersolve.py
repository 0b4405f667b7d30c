import logging
from collections import defaultdict
from typing import Any

from src.algebra.families import LprimeTable
from src.algebra.superfields import AlgebraTable, WeightCodec, exact
from src.linalg.fields import Field, RationalField
from src.linalg.sparse import SparseMatrix, span_rank
from src.services.solvers.threads.block_worker_thread import run_tasks
from src.utils.results import DerivationClassification, DerivationSolution

logger = logging.getLogger(__name__)

Pair = tuple[int, int]


def _unknowns(table: AlgebraTable, parity: int) -> list[Pair]:
    """
    d(k, m), the coefficient of e_m in D(e_k), admissible when |e_m| = |e_k| + γ.
    """
    P = table.parity
    return [(k, m) for k in range(table.dim) for m in range(table.dim) if P[m] == (P[k] + parity) % 2]


def _row(table: AlgebraTable, parity: int, index: dict[Pair, int], a: int, b: int, m: int) -> dict[int, Any]:
    """
    D[e_a, e_b] − [D e_a, e_b] − (−1)^{γ|e_a|}[e_a, D e_b], coordinate m.
    """
    row: dict[int, Any] = {}

    def add(pair: Pair, value) -> None:
        col = index[pair]
        updated = row.get(col, 0) + value
        if updated:
            row[col] = updated
        else:
            row.pop(col, None)

    for k, c in table.constants(a, b).items():
        add((k, m), c)
    for j, c in table.right_into.get((b, m), ()):
        add((a, j), -c)
    sign = 1 if (parity * table.parity[a]) % 2 else -1
    for j, c in table.left_into.get((a, m), ()):
        add((b, j), sign * c)
    return row


def _row_keys(table: AlgebraTable, parity: int) -> list[tuple[int, int, int]]:
    # unordered pairs suffice: the (b, a) row is ± the (a, b) row
    P = table.parity
    return [
        (a, b, m)
        for a in range(table.dim)
        for b in range(a, table.dim)
        for m in range(table.dim)
        if P[m] == (P[a] + P[b] + parity) % 2
    ]


def assemble_der_system(table: AlgebraTable, parity: int, field: Field | None = None) -> tuple[SparseMatrix, list[Pair]]:
    """
    The full derivation system of parity γ, one row per (a ≤ b, m).
    """
    unknowns = _unknowns(table, parity)
    index = {pair: col for col, pair in enumerate(unknowns)}
    rows = []
    for a, b, m in _row_keys(table, parity):
        row = _row(table, parity, index, a, b, m)
        if row:
            rows.append(row)
    return SparseMatrix.from_rows(rows, len(unknowns), field or RationalField()), unknowns


def solve_derivations(
    table: AlgebraTable, parity: int, field: Field | None = None, workers: int = 1
) -> DerivationSolution:
    """
    Der_γ(L), blocked by (w(m) − w(k), deg(m) − deg(k)); each row (a, b, m)
    lives in the block of w(m) − w(a) − w(b).
    """
    field = field or RationalField()
    parity %= 2
    codec = WeightCodec(table.weights, spread=3)
    code = [codec.encode(weight) for weight in table.weights]
    D = table.zdegree

    unknown_blocks: dict[tuple[int, int], list[Pair]] = defaultdict(list)
    for k, m in _unknowns(table, parity):
        unknown_blocks[(code[m] - code[k], table.degree_key(D[m] - D[k]))].append((k, m))
    row_blocks: dict[tuple[int, int], list[tuple[int, int, int]]] = defaultdict(list)
    for a, b, m in _row_keys(table, parity):
        row_blocks[(code[m] - code[a] - code[b], table.degree_key(D[m] - D[a] - D[b]))].append((a, b, m))

    keys = sorted(unknown_blocks)

    def solve_one(key: tuple[int, int]) -> list[dict[Pair, Any]]:
        unknowns = unknown_blocks[key]
        index = {pair: col for col, pair in enumerate(unknowns)}
        eliminator = field.eliminator(len(unknowns))
        for a, b, m in row_blocks.get(key, ()):
            eliminator.add_row(_row(table, parity, index, a, b, m))
            if eliminator.rank == len(unknowns):
                break
        return [
            {unknowns[col]: exact(value) for col, value in vector.items()}
            for vector in eliminator.nullspace().vectors
        ]

    solution = DerivationSolution(parity=parity, field=repr(field), unknowns=sum(map(len, unknown_blocks.values())))
    for vectors in run_tasks(keys, solve_one, workers):
        solution.basis.extend(vectors)
    solution.blocks = len(keys)
    logger.info("%s(%d): dim Der_%d = %d over %s", table.family, table.n, parity, solution.dimension, field)
    return solution


def ad_vector(lprime: AlgebraTable, t: int, embedding: tuple[int, ...]) -> dict[Pair, Any]:
    """
    ad(e′_t) restricted to L, keyed like the derivation unknowns.
    """
    position = {target: k for k, target in enumerate(embedding)}
    vector = {}
    for k, target in enumerate(embedding):
        for m, c in lprime.constants(t, target).items():
            if m not in position:
                raise ValueError(f"ad({lprime.labels[t]}) does not preserve L")
            vector[(k, position[m])] = c
    return vector


def ad_injectivity(lprime: LprimeTable) -> tuple[int, int]:
    """
    (rank of x ↦ ad x|_L over the L′ basis, dim L′).
    """
    dim = len(lprime.embedding)
    vectors = [_flatten(ad_vector(lprime.table, t, lprime.embedding), dim) for t in range(lprime.table.dim)]
    return span_rank(vectors, dim * dim), lprime.table.dim


def _flatten(vector: dict[Pair, Any], dim: int) -> dict[int, Any]:
    return {k * dim + m: value for (k, m), value in vector.items()}


def classify_derivations(
    solutions: list[DerivationSolution], table: AlgebraTable, lprime: LprimeTable
) -> DerivationClassification:
    """
    Compare Der L with ad L′ parity by parity; both inclusions are checked by
    span membership, and the added elements of L′ are reported when their ad
    falls outside ad L.
    """
    dim = table.dim
    big = lprime.table
    result = DerivationClassification()
    result.ad_inside = True
    result.derivations_inner = True

    for solution in solutions:
        parity = solution.parity
        derivations = [_flatten(vector, dim) for vector in solution.basis]
        members = [t for t in range(big.dim) if big.parity[t] == parity]
        ads = {t: _flatten(ad_vector(big, t, lprime.embedding), dim) for t in members}
        result.lprime_dimension += len(members)
        result.dimension += solution.dimension

        der_eliminator = RationalField().eliminator(dim * dim)
        der_eliminator.add_rows(derivations)
        ad_eliminator = RationalField().eliminator(dim * dim)
        ad_eliminator.add_rows(ads.values())
        result.ad_rank += ad_eliminator.rank

        for t, vector in ads.items():
            if not der_eliminator.contains(vector):
                result.ad_inside = False
                result.witness = result.witness or {"ad_not_derivation": big.labels[t]}
        for position, vector in enumerate(derivations):
            if not ad_eliminator.contains(vector):
                result.derivations_inner = False
                result.witness = result.witness or {
                    "outer_derivation": {f"{k},{m}": str(v) for (k, m), v in solution.basis[position].items()}
                }

        inner_only = RationalField().eliminator(dim * dim)
        inner_only.add_rows(ads[t] for t in members if t < dim)
        for t in lprime.outer:
            if big.parity[t] == parity and not inner_only.contains(ads[t]):
                result.outer.append(big.labels[t])

    if not result.passed:
        logger.error("Der %s(%d) differs from ad L′: %s", table.family, table.n, result.witness)
    return result
