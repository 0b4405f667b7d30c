import logging
from typing import Any, Mapping

from tqdm import tqdm

from src.algebra.families import AUXILIARY, FAMILIES, LprimeTable, epsilon_lift
from src.algebra.superfields import AlgebraTable, Weight, exact
from src.linalg.fields import Field, PrimeField, RationalField
from src.linalg.sparse import SparseMatrix, in_span, solve
from src.services.solvers.blocks import BiderAssembler, BlockSystem
from src.services.solvers.threads.block_worker_thread import run_tasks
from src.utils.exceptions import FamilyError, ResourceLimitError
from src.utils.results import (
    BiderSolution,
    BlockResult,
    Certificate,
    FactorizationResult,
    InnerResidual,
    LemmaReport,
)

logger = logging.getLogger(__name__)

Triple = tuple[int, int, int]


def inner_residual(table: AlgebraTable, scale: int = 1) -> InnerResidual:
    """
    Evaluate f = λ·[ , ] exactly on both biderivation identities for every
    basis triple; the first nonzero residual is kept as a witness.
    """
    report = InnerResidual(scale=scale)
    P = table.parity
    structure = table.structure

    def left(a: int, vector: Mapping[int, Any], out: dict, factor) -> None:
        for k, value in vector.items():
            for m, c in structure.get((a, k), {}).items():
                out[m] = out.get(m, 0) + factor * value * c

    def right(vector: Mapping[int, Any], b: int, out: dict, factor) -> None:
        for k, value in vector.items():
            for m, c in structure.get((k, b), {}).items():
                out[m] = out.get(m, 0) + factor * value * c

    for x in range(table.dim):
        for y in range(table.dim):
            xy = table.constants(x, y)
            for z in range(table.dim):
                report.triples_checked += 1
                yz, xz = table.constants(y, z), table.constants(x, z)

                first: dict[int, Any] = {}
                right(xy, z, first, scale)
                left(x, yz, first, -scale)
                right(xz, y, first, -scale if not (P[y] and P[z]) else scale)

                second: dict[int, Any] = {}
                left(x, yz, second, scale)
                right(xy, z, second, -scale)
                left(y, xz, second, -scale if not (P[x] and P[y]) else scale)

                for name, residual in (("first", first), ("second", second)):
                    residual = {m: value for m, value in residual.items() if value}
                    if residual:
                        report.counterexample = (name, x, y, z)
                        report.residual = residual
                        logger.error(
                            "λ=%d bracket violates the %s biderivation identity at (%s, %s, %s)",
                            scale,
                            name,
                            table.labels[x],
                            table.labels[y],
                            table.labels[z],
                        )
                        return report
    return report


def block_epsilon(table: AlgebraTable, weight: Weight, degree: int) -> tuple | None:
    if table.family not in FAMILIES + AUXILIARY:
        return None
    try:
        return epsilon_lift(table.family, table.n, weight, degree)
    except FamilyError:
        return None


def solve_block(
    assembler: BiderAssembler,
    block: BlockSystem,
    field: Field,
    lower_bound: int = 0,
    block_limit: int = 0,
    retain: bool = False,
) -> BlockResult:
    """
    Stream the block's rows into an incremental eliminator.

    Streaming stops as soon as rank reaches unknowns − lower_bound: the
    nullity can only shrink with more rows and never drops below a verified
    solution count. A row cap turns the block into an "aborted" record.
    """
    weight = assembler.weight_of(block.weight_code)
    result = BlockResult(
        parity=block.parity,
        weight=weight,
        degree=block.degree,
        epsilon=block_epsilon(assembler.table, weight, block.degree),
        unknowns=block.size,
        lower_bound=lower_bound,
    )
    eliminator = field.eliminator(block.size, assembler.column_order(block))
    target = block.size - lower_bound
    try:
        if eliminator.rank < target:
            for row in assembler.rows(block):
                if block_limit and eliminator.rows_seen >= block_limit:
                    raise ResourceLimitError(
                        f"Block (γ={block.parity}, ε={result.weight}, i={block.degree}) exceeded {block_limit} rows"
                    )
                eliminator.add_row(row)
                if eliminator.rank >= target:
                    break
        result.status = "solved"
    except ResourceLimitError as error:
        logger.error("%s", str(error))
        result.status = "aborted"

    result.rows_streamed = eliminator.rows_seen
    result.rank = eliminator.rank
    if retain and result.solved and result.nullity:
        for vector in eliminator.nullspace().vectors:
            result.basis.append({block.unknowns[col]: exact(value) for col, value in vector.items()})
    logger.debug(
        "Block γ=%d ε=%s i=%d: %d unknowns, %d rows, rank %d, %s",
        block.parity,
        result.weight,
        block.degree,
        block.size,
        result.rows_streamed,
        result.rank,
        result.status,
    )
    return result


def _bracket_in_span(assembler: BiderAssembler, blocks: list[BlockSystem], results: list[BlockResult], field: Field):
    for block, result in zip(blocks, results):
        if not result.is_inner_line:
            continue
        if not result.solved:
            return None
        basis = [{block.index[triple]: value for triple, value in vector.items()} for vector in result.basis]
        return in_span(basis, assembler.bracket_vector(block), block.size, field)
    return False


def solve_bder(
    table: AlgebraTable,
    parity: int,
    field: Field | None = None,
    inner_verified: bool | None = None,
    block_limit: int = 0,
    workers: int = 1,
    retain: bool = True,
    progress: bool = False,
) -> BiderSolution:
    """
    Every super-biderivation of the given parity, block by block.

    For parity 0 the bracket is a known exact solution once its residual
    has been verified; that lower bound lets the (θ, 0) block stop early.
    """
    field = field or RationalField()
    parity %= 2
    assembler = BiderAssembler(table, parity)
    blocks = assembler.enumerate_blocks()

    if parity == 0 and inner_verified is None and not table.is_abelian():
        inner_verified = inner_residual(table).passed
    bracket_known = parity == 0 and bool(inner_verified) and not table.is_abelian()
    track_span = parity == 0 and not table.is_abelian()

    def solve_one(block: BlockSystem) -> BlockResult:
        on_inner_line = assembler.weight_of(block.weight_code).is_zero() and block.degree == 0
        lower_bound = 1 if bracket_known and on_inner_line else 0
        # the inner line is kept even without retain: the bracket-in-span test reads it
        keep = (on_inner_line and (retain or track_span)) or (retain and table.dim <= 16)
        return solve_block(assembler, block, field, lower_bound, block_limit, keep)

    with tqdm(total=len(blocks), desc=f"{table.family}({table.n}) γ={parity}", disable=not progress) as bar:
        results = run_tasks(blocks, solve_one, workers, bar)

    solution = BiderSolution(parity=parity, field=repr(field), blocks=results)
    if track_span:
        solution.bracket_in_span = _bracket_in_span(assembler, blocks, results, field)
        if not retain:
            for block in results:
                block.basis.clear()
    logger.info(
        "%s(%d) γ=%d over %s: total nullity %d in %d blocks%s",
        table.family,
        table.n,
        parity,
        field,
        solution.total,
        len(results),
        "" if solution.complete else " (incomplete)",
    )
    return solution


def solve_bder_lie(table: AlgebraTable, field: Field | None = None) -> BiderSolution:
    """
    Biderivations of an ordinary Lie algebra: the same solver, all signs trivial.
    """
    if any(table.parity):
        raise ValueError(f"{table.family} has odd elements; it is not a Lie algebra")
    return solve_bder(table, 0, field)


def is_inner(even: BiderSolution, odd: BiderSolution | None = None) -> bool:
    odd_total = odd.total if odd is not None else 0
    complete = even.complete and (odd is None or odd.complete)
    return complete and even.total == 1 and bool(even.bracket_in_span) and odd_total == 0


def certify_mod_p(
    table: AlgebraTable,
    prime: int,
    block_limit: int = 0,
    workers: int = 1,
    progress: bool = False,
    residual: InnerResidual | None = None,
) -> Certificate:
    """
    F_p nullities bound the rational ones from above; the bracket, checked
    exactly over ℚ, bounds the even one from below.
    """
    field = PrimeField(prime)
    residual = residual or inner_residual(table)
    even = solve_bder(table, 0, field, residual.passed, block_limit, workers, True, progress)
    odd = solve_bder(table, 1, field, residual.passed, block_limit, workers, False, progress)
    certificate = Certificate(
        prime=prime,
        even_nullity=even.total,
        odd_nullity=odd.total,
        bracket_residual_zero=residual.passed,
        bracket_in_span=even.bracket_in_span,
        complete=even.complete and odd.complete,
        blocks=even.blocks + odd.blocks,
    )
    if not certificate.valid:
        logger.error(
            "Certificate for %s(%d) mod %d fails: nullities (%d, %d), bracket residual zero %s",
            table.family,
            table.n,
            prime,
            certificate.even_nullity,
            certificate.odd_nullity,
            certificate.bracket_residual_zero,
        )
    return certificate


def bracket_coefficients(table: AlgebraTable, scale: int = 1) -> dict[Triple, Any]:
    return {
        (a, b, k): scale * c for (a, b), coefficients in table.structure.items() for k, c in coefficients.items()
    }


def _values(f: Mapping[Triple, Any]) -> dict[tuple[int, int], dict[int, Any]]:
    grouped: dict[tuple[int, int], dict[int, Any]] = {}
    for (a, b, k), value in f.items():
        if value:
            grouped.setdefault((a, b), {})[k] = value
    return grouped


def _solve_side(lprime: AlgebraTable, embedding: tuple[int, ...], values, a: int, left: bool):
    """
    Coordinates of φ(e_a) (left) or ψ(e_a) (right) in L′, or None.
    """
    rows: dict[tuple[int, int], dict[int, Any]] = {}
    rhs_by_key: dict[tuple[int, int], Any] = {}
    for other, target in enumerate(embedding):
        for t in range(lprime.dim):
            pair = (t, target) if left else (target, t)
            for m, c in lprime.constants(*pair).items():
                rows.setdefault((other, m), {})[t] = c
        value = values.get((a, other) if left else (other, a), {})
        for k, c in value.items():
            rhs_by_key[(other, embedding[k])] = c
    keys = sorted(set(rows) | set(rhs_by_key))
    matrix = SparseMatrix.from_rows([rows.get(key, {}) for key in keys], lprime.dim, RationalField())
    rhs = {position: rhs_by_key[key] for position, key in enumerate(keys) if key in rhs_by_key}
    solution = solve(matrix, rhs)
    if solution is None:
        return None
    return {t: exact(value) for t, value in sorted(solution.items())}


def factor_biderivation(
    table: AlgebraTable,
    lprime: LprimeTable,
    f: Mapping[Triple, Any],
    shift: tuple[Weight, int] | None = None,
) -> FactorizationResult:
    """
    Find φ, ψ : L → L′ with f(x, y) = [φ(x), y] = [x, ψ(y)].

    A failure is a finding, never an exception. With a (weight, degree)
    shift, every component of φ(e_a), ψ(e_a) must sit at weight w(a) + ε
    and degree deg(a) + i.
    """
    result = FactorizationResult()
    values = _values(f)
    big = lprime.table
    embedding = lprime.embedding

    for a in range(table.dim):
        for side, target in (("phi", result.phi), ("psi", result.psi)):
            coordinates = _solve_side(big, embedding, values, a, side == "phi")
            if coordinates is None:
                result.status = "failed"
                result.message = f"no {side} image for {table.labels[a]}"
                logger.warning("Factorization of a %s biderivation fails: %s", table.family, result.message)
                return result
            target[a] = coordinates

    for a in range(table.dim):
        for b in range(table.dim):
            expected = {embedding[k]: v for k, v in values.get((a, b), {}).items()}
            via_phi = big.bracket(result.phi[a], {embedding[b]: 1})
            via_psi = big.bracket({embedding[a]: 1}, result.psi[b])
            if via_phi != expected or via_psi != expected:
                result.status = "failed"
                result.message = f"recomposition differs at ({table.labels[a]}, {table.labels[b]})"
                logger.warning("Factorization of a %s biderivation fails: %s", table.family, result.message)
                return result

    if shift is not None:
        weight, degree = shift
        result.graded = all(
            big.weights[t] - table.weights[a] == weight
            and big.degree_key(big.zdegree[t]) == big.degree_key(table.zdegree[a] + degree)
            for images in (result.phi, result.psi)
            for a, vector in images.items()
            for t in vector
        )
        if not result.graded:
            result.status = "failed"
            result.message = "φ or ψ leaves the block's weight and degree"
            logger.warning("Factorization of a %s biderivation is not graded", table.family)
            return result

    result.status = "success"
    return result


def vanishing_crossref(solutions: list[BiderSolution]) -> LemmaReport:
    """
    Cross-reference: a nonzero block off the (θ, 0) line would contradict
    the vanishing criteria; the block table already witnesses them.
    """
    offending = [
        block for solution in solutions for block in solution.blocks if block.nullity and not block.is_inner_line
    ]
    report = LemmaReport(
        lemma="vanishing_off_inner_line",
        passed=not offending and all(solution.complete for solution in solutions),
        method="cross-reference",
        details={"blocks": sum(len(solution.blocks) for solution in solutions)},
    )
    if offending:
        block = offending[0]
        report.witness = {
            "parity": block.parity,
            "weight": [str(value) for value in block.weight.coords],
            "degree": block.degree,
            "nullity": block.nullity,
        }
    elif not report.passed:
        report.witness = {
            "unsolved_blocks": sum(not block.solved for solution in solutions for block in solution.blocks)
        }
    return report
