from src.linalg.fields import PrimeField, RationalField
from src.reports.models import DerivationRecord
from src.services.solvers.dersolve import classify_derivations, solve_derivations
from src.services.verification.stages.stage import Stage


class DerivationStage(Stage):
    """
    Der L, solved exactly, compared with ad L′.

    Classification needs exact span membership, so this stage works over ℚ
    whatever field the run uses for biderivations. The dimensions are solved
    a second time over F_p and the two counts must agree.
    """

    name = "der"

    def execute(self) -> None:
        table = self.context.table
        lprime = self.context.lprime
        field = RationalField()
        workers = self.context.options.workers

        witness = self.context.reject_broken_grading(("derivations_inner", "derivations_modular"))
        if witness is not None:
            self.context.report.derivations = DerivationRecord(
                field=repr(field),
                dimension=0,
                lprime_dimension=0,
                ad_rank=0,
                ad_inside=False,
                derivations_inner=False,
                witness=witness,
                passed=False,
            )
            return

        solutions = [solve_derivations(table, parity, field, workers) for parity in self.context.parities]
        per_parity = {str(solution.parity): solution.dimension for solution in solutions}

        modular = PrimeField(self.context.options.prime)
        modular_per_parity = {
            str(parity): solve_derivations(table, parity, modular, workers).dimension
            for parity in self.context.parities
        }
        if modular_per_parity != per_parity:
            self._logger.error(
                "dim Der %s(%d) differs over ℚ %s and %s %s", table.family, table.n, per_parity, modular, modular_per_parity
            )
        self.context.record("derivations_modular", modular_per_parity == per_parity)

        if lprime is None:
            dimension = sum(solution.dimension for solution in solutions)
            self.context.report.derivations = DerivationRecord(
                field=repr(field),
                per_parity=per_parity,
                modular_field=repr(modular),
                modular_per_parity=modular_per_parity,
                dimension=dimension,
                lprime_dimension=0,
                ad_rank=0,
                ad_inside=False,
                derivations_inner=False,
                passed=False,
            )
            self.context.report.record("derivations_inner", "not_applicable")
            return

        classification = classify_derivations(solutions, table, lprime)
        self.context.report.derivations = DerivationRecord(
            field=repr(field),
            per_parity=per_parity,
            modular_field=repr(modular),
            modular_per_parity=modular_per_parity,
            dimension=classification.dimension,
            lprime_dimension=classification.lprime_dimension,
            ad_rank=classification.ad_rank,
            ad_inside=classification.ad_inside,
            derivations_inner=classification.derivations_inner,
            outer=classification.outer,
            witness=classification.witness,
            passed=classification.passed,
        )
        self.context.record("derivations_inner", classification.passed)

    def next_stage(self) -> Stage:
        from src.services.verification.stages.biderivation_stage import BiderivationStage

        return BiderivationStage()
