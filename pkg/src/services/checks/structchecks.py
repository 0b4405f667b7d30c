import logging
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from src.algebra.families import LprimeTable
from src.algebra.superfields import AlgebraTable
from src.linalg.fields import RationalField
from src.linalg.sparse import SparseMatrix, nullspace, span_rank
from src.utils.results import LemmaReport

logger = logging.getLogger(__name__)

Vector = dict[int, Any]


def _stringify(vector: Mapping[int, Any]) -> dict[str, str]:
    return {str(key): str(value) for key, value in sorted(vector.items())}


def _hom_vector(table: AlgebraTable, x: Mapping[int, Any], domain: Sequence[int]) -> Vector:
    """
    The map y ↦ [x, y] on the given basis elements, flattened (position, m).
    """
    flat = {}
    for position, y in enumerate(domain):
        for m, value in table.bracket(x, {y: 1}).items():
            flat[position * table.dim + m] = value
    return flat


def _injectivity(
    table: AlgebraTable, sources: Sequence[int], domain: Sequence[int]
) -> tuple[int, Vector | None]:
    """
    Rank of x ↦ [x, ·]|_domain on span(sources), with a kernel vector when it is not injective.
    """
    # columns of the transposed system are the source elements
    transposed: dict[int, dict[int, Any]] = {}
    for col, x in enumerate(sources):
        for row, value in _hom_vector(table, {x: 1}, domain).items():
            transposed.setdefault(row, {})[col] = value
    matrix = SparseMatrix.from_rows([transposed[row] for row in sorted(transposed)], len(sources), RationalField())
    kernel = nullspace(matrix)
    rank = len(sources) - kernel.dimension
    if kernel.dimension:
        return rank, {sources[col]: value for col, value in kernel.vectors[0].items()}
    return rank, None


def check_bracket_onto(table: AlgebraTable) -> LemmaReport:
    """
    [L₋₁, L_i] = L_{i−1} for 0 ≤ i ≤ ξ, by exact rank of the bracket image.
    """
    minus_one = table.indices_of_degree(-1)
    details = {}
    for i in range(0, table.top_degree + 1):
        images = [table.constants(a, b) for a in minus_one for b in table.indices_of_degree(i)]
        rank = span_rank(images, table.dim)
        target = len(table.indices_of_degree(i - 1))
        details[str(i)] = {"rank": rank, "target": target}
        if rank != target:
            logger.error("[L-1, L%d] has rank %d, expected %d in %s", i, rank, target, table.family)
            return LemmaReport("bracket_onto", False, witness={"degree": i, "rank": rank, "target": target}, details=details)
    return LemmaReport("bracket_onto", True, details=details)


def generated_subalgebra_dimension(table: AlgebraTable, generators: Iterable[Mapping[int, Any]]) -> int:
    """
    dim alg(V): close span(V) under brackets with the generators.
    """
    generators = [dict(vector) for vector in generators]
    eliminator = RationalField().eliminator(table.dim)
    frontier = [vector for vector in generators if eliminator.add_row(vector)]
    while frontier:
        discovered = []
        for g in generators:
            for vector in frontier:
                image = table.bracket(g, vector)
                if image and eliminator.add_row(image):
                    discovered.append(image)
        frontier = discovered
    return eliminator.rank


def check_generated(table: AlgebraTable, degrees: Sequence[int] = (-1, 0, 1)) -> LemmaReport:
    """
    alg(L₋₁ ⊕ L₀ ⊕ L₁) = L.
    """
    generators = [{k: 1} for degree in degrees for k in table.indices_of_degree(degree)]
    dimension = generated_subalgebra_dimension(table, generators)
    details = {"degrees": list(degrees), "dimension": dimension, "target": table.dim}
    if dimension != table.dim:
        return LemmaReport("generation", False, witness={"dimension": dimension, "target": table.dim}, details=details)
    return LemmaReport("generation", True, details=details)


def check_transitive(lprime: LprimeTable | AlgebraTable) -> LemmaReport:
    """
    a ∈ ⊕_{i≥0} L′_i with [a, L′₋₁] = 0 forces a = 0.
    """
    table = lprime.table if isinstance(lprime, LprimeTable) else lprime
    nonnegative = [k for k, degree in enumerate(table.zdegree) if degree >= 0]
    minus_one = [k for k, degree in enumerate(table.zdegree) if degree == -1]
    rank, kernel = _injectivity(table, nonnegative, minus_one)
    details = {"rank": rank, "target": len(nonnegative)}
    if kernel is not None:
        logger.error("%s is not transitive", table.family)
        return LemmaReport("transitivity", False, witness=_stringify(kernel), details=details)
    return LemmaReport("transitivity", True, details=details)


def representation_matrices(table: AlgebraTable, acting: Sequence[int], module: Sequence[int]) -> list[list[Vector]]:
    """
    For each acting element h, the columns ρ(h)e_b = [h, e_b] in module coordinates.
    """
    position = {k: p for p, k in enumerate(module)}
    matrices = []
    for h in acting:
        columns = []
        for b in module:
            image = table.constants(h, b)
            columns.append({position[m]: c for m, c in image.items() if m in position})
        matrices.append(columns)
    return matrices


def module_commutant_dimension(matrices: list[list[Vector]], d: int) -> int:
    """
    dim {A : Aρ(h) = ρ(h)A for every h}, over ℚ.
    """
    rows = []
    for columns in matrices:
        rho = {(i, j): value for j, column in enumerate(columns) for i, value in column.items()}
        for i in range(d):
            for j in range(d):
                row: dict[int, Any] = {}
                for l in range(d):
                    # (Aρ)_{ij} = Σ_l A_il ρ_lj ; (ρA)_ij = Σ_l ρ_il A_lj
                    value = rho.get((l, j), 0)
                    if value:
                        row[i * d + l] = row.get(i * d + l, 0) + value
                    value = rho.get((i, l), 0)
                    if value:
                        row[l * d + j] = row.get(l * d + j, 0) - value
                row = {col: value for col, value in row.items() if value}
                if row:
                    rows.append(row)
    return nullspace(SparseMatrix.from_rows(rows, d * d, RationalField())).dimension


def generated_submodule_dimension(matrices: list[list[Vector]], d: int, start: Mapping[int, Any]) -> int:
    eliminator = RationalField().eliminator(d)
    frontier = [dict(start)] if eliminator.add_row(start) else []
    while frontier:
        discovered = []
        for columns in matrices:
            for vector in frontier:
                image: dict[int, Any] = {}
                for j, value in vector.items():
                    for i, c in columns[j].items():
                        image[i] = image.get(i, 0) + c * value
                image = {i: value for i, value in image.items() if value}
                if image and eliminator.add_row(image):
                    discovered.append(image)
        frontier = discovered
    return eliminator.rank


def _samples(d: int, seed: int, count: int) -> list[dict[int, int]]:
    rng = np.random.default_rng(seed)
    samples = []
    for draw in rng.integers(-5, 6, size=(count, d)):
        vector = {i: int(value) for i, value in enumerate(draw) if value}
        if vector:
            samples.append(vector)
    return samples


def check_irreducible(table: AlgebraTable, seed: int = 0, samples: int = 20) -> LemmaReport:
    """
    L₋₁ as an L₀-module: commutant of dimension 1, and every basis vector
    and seeded random vector generates the whole module. Both are proxies.
    """
    module = table.indices_of_degree(-1)
    acting = table.indices_of_degree(0)
    d = len(module)
    matrices = representation_matrices(table, acting, module)
    commutant = module_commutant_dimension(matrices, d)
    details: dict[str, Any] = {"module_dimension": d, "commutant_dimension": commutant}
    notes = "commutant dimension 1 decides irreducibility only under complete reducibility"
    if commutant != 1:
        return LemmaReport(
            "irreducibility", False, "proxy", witness={"commutant_dimension": commutant}, details=details, notes=notes
        )
    starts = [{i: 1} for i in range(d)] + _samples(d, seed, samples)
    for start in starts:
        dimension = generated_submodule_dimension(matrices, d, start)
        if dimension != d:
            return LemmaReport(
                "irreducibility",
                False,
                "proxy",
                witness={"start": _stringify(start), "dimension": dimension},
                details=details,
                notes=notes,
            )
    details["starts"] = len(starts)
    return LemmaReport("irreducibility", True, "proxy", details=details, notes=notes)


def check_H_pairing(table: AlgebraTable, restrict_l: Mapping[int, Sequence[int]] | None = None) -> LemmaReport:
    """
    For k + l = ξ, x ∈ L_k with [x, L_l] = 0 forces x = 0; the bracket lands in L_ξ.
    restrict_l replaces L_l by the listed basis elements for degree k.
    """
    xi = table.top_degree
    details = {}
    for k in range(0, xi + 1):
        l = xi - k
        sources = table.indices_of_degree(k)
        domain = list(restrict_l[k]) if restrict_l and k in restrict_l else table.indices_of_degree(l)
        rank, kernel = _injectivity(table, sources, domain)
        details[f"{k},{l}"] = {"rank": rank, "target": len(sources)}
        if kernel is not None:
            logger.error("Pairing L%d x L%d is degenerate in %s", k, l, table.family)
            return LemmaReport(
                "hamiltonian_pairing", False, witness={"k": k, "l": l, "kernel": _stringify(kernel)}, details=details
            )
    return LemmaReport("hamiltonian_pairing", True, details=details)


def ideal_closure_dimension(table: AlgebraTable, start: Mapping[int, Any]) -> int:
    eliminator = RationalField().eliminator(table.dim)
    frontier = [dict(start)] if eliminator.add_row(start) else []
    while frontier:
        discovered = []
        for a in range(table.dim):
            for vector in frontier:
                image = table.bracket({a: 1}, vector)
                if image and eliminator.add_row(image):
                    discovered.append(image)
        frontier = discovered
    return eliminator.rank


def check_simplicity_sample(table: AlgebraTable, seed: int = 0, samples: int = 20) -> LemmaReport:
    """
    The ideal generated by each basis vector and by seeded random vectors is L.
    Sampling only, so a pass is evidence rather than proof.
    """
    starts = [{k: 1} for k in range(table.dim)] + _samples(table.dim, seed, samples)
    for start in starts:
        dimension = ideal_closure_dimension(table, start)
        if dimension != table.dim:
            return LemmaReport(
                "simplicity_sample",
                False,
                "probabilistic",
                witness={"start": _stringify(start), "ideal_dimension": dimension},
                details={"starts": len(starts)},
            )
    return LemmaReport("simplicity_sample", True, "probabilistic", details={"starts": len(starts)})
