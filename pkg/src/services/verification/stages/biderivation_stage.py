from src.linalg.fields import PrimeField
from src.reports.models import (
    BiderivationRecord,
    BlockRecord,
    CertificateRecord,
    FactorizationRecord,
    LemmaRecord,
    ResidualRecord,
)
from src.services.solvers.bidersolve import (
    certify_mod_p,
    factor_biderivation,
    inner_residual,
    is_inner,
    solve_bder,
    vanishing_crossref,
)
from src.services.verification.stages.stage import Stage
from src.utils.results import BiderSolution, BlockResult

RESIDUAL_SCALES = (1, -2, 7)


def block_record(block: BlockResult) -> BlockRecord:
    return BlockRecord(
        parity=block.parity,
        weight=[str(value) for value in block.weight.coords],
        level=str(block.level),
        degree=block.degree,
        unknowns=block.unknowns,
        rows_streamed=block.rows_streamed,
        rank=block.rank,
        nullity=block.nullity,
        status=block.status,
        epsilon=[str(value) for value in block.epsilon] if block.epsilon is not None else None,
    )


class BiderivationStage(Stage):
    """
    Super-biderivations of every requested parity, block by block.

    Over F_p with both parities the run produces a modular certificate;
    over ℚ retained solutions are factored through L′.
    """

    name = "bder"

    def execute(self) -> None:
        table = self.context.table
        options = self.context.options
        field = self.context.field
        parities = self.context.parities
        certify = isinstance(field, PrimeField) and parities == (0, 1)

        checks = ("innerness", "vanishing_off_inner_line") + (("certificate",) if certify else ())
        witness = self.context.reject_broken_grading(checks)
        if witness is not None:
            self.context.report.biderivations = BiderivationRecord(
                field=repr(field), parities=list(parities), complete=False, witness=witness
            )
            return

        residuals = [inner_residual(table, scale) for scale in RESIDUAL_SCALES]
        verified = residuals[0].passed
        self.context.record("inner_residual", all(residual.passed for residual in residuals))

        if certify:
            solutions = self._certify(residuals[0])
        else:
            solutions = [
                solve_bder(
                    table,
                    parity,
                    field,
                    verified,
                    options.block_limit,
                    options.workers,
                    options.retain,
                    options.progress,
                )
                for parity in parities
            ]

        complete = all(solution.complete for solution in solutions)
        even = next((solution for solution in solutions if solution.parity == 0), None)
        odd = next((solution for solution in solutions if solution.parity == 1), None)
        inner = self._inner(even, odd)

        record = BiderivationRecord(
            field=repr(field),
            parities=list(parities),
            nullity={str(solution.parity): solution.total for solution in solutions},
            unknowns={str(solution.parity): solution.unknowns for solution in solutions},
            bracket_in_span=even.bracket_in_span if even is not None else None,
            inner=inner,
            complete=complete,
            residuals=[
                ResidualRecord(
                    scale=residual.scale,
                    triples_checked=residual.triples_checked,
                    passed=residual.passed,
                    counterexample=(
                        [residual.counterexample[0]] + [table.labels[k] for k in residual.counterexample[1:]]
                        if residual.counterexample
                        else None
                    ),
                )
                for residual in residuals
            ],
            blocks=[block_record(block) for solution in solutions for block in solution.blocks],
        )
        self.context.report.biderivations = record
        if not complete:
            self.context.report.complete = False
        self.context.record("innerness", inner, complete)

        crossref = vanishing_crossref(solutions)
        self.context.report.lemmas.append(LemmaRecord(**vars(crossref)))
        self.context.record(crossref.lemma, crossref.passed, complete)

        if not isinstance(field, PrimeField) and options.retain:
            self._factor(solutions, record)

    def _inner(self, even: BiderSolution | None, odd: BiderSolution | None) -> bool:
        if even is not None:
            return is_inner(even, odd)
        return odd is not None and odd.complete and odd.total == 0

    def _certify(self, residual) -> list[BiderSolution]:
        table = self.context.table
        options = self.context.options
        certificate = certify_mod_p(
            table,
            options.prime,
            options.block_limit,
            options.workers,
            options.progress,
            residual,
        )
        self.context.report.certificates.append(
            CertificateRecord(
                prime=certificate.prime,
                even_nullity=certificate.even_nullity,
                odd_nullity=certificate.odd_nullity,
                bracket_residual_zero=certificate.bracket_residual_zero,
                bracket_in_span=certificate.bracket_in_span,
                complete=certificate.complete,
                valid=certificate.valid,
            )
        )
        self.context.record("certificate", certificate.valid, certificate.complete)
        field = repr(self.context.field)
        even = BiderSolution(0, field, [block for block in certificate.blocks if block.parity == 0])
        even.bracket_in_span = certificate.bracket_in_span
        odd = BiderSolution(1, field, [block for block in certificate.blocks if block.parity == 1])
        return [even, odd]

    def _factor(self, solutions: list[BiderSolution], record: BiderivationRecord) -> None:
        lprime = self.context.lprime
        retained = [pair for solution in solutions for pair in solution.retained()]
        if lprime is None or not retained:
            self.context.report.record("factorization", "not_applicable")
            return

        succeeded = True
        for block, vector in retained:
            result = factor_biderivation(self.context.table, lprime, vector, (block.weight, block.degree))
            succeeded = succeeded and result.success
            record.factorizations.append(
                FactorizationRecord(
                    parity=block.parity,
                    weight=[str(value) for value in block.weight.coords],
                    degree=block.degree,
                    status=result.status,
                    graded=result.graded,
                    message=result.message,
                )
            )
        self.context.record("factorization", succeeded)

    def next_stage(self) -> Stage:
        from src.services.verification.stages.lemma_stage import LemmaStage

        return LemmaStage()
