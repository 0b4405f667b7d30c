from src.algebra.families import degree_zero_part
from src.reports.models import LemmaRecord
from src.services.checks.structchecks import (
    check_bracket_onto,
    check_generated,
    check_H_pairing,
    check_irreducible,
    check_simplicity_sample,
    check_transitive,
)
from src.services.solvers.bidersolve import is_inner, solve_bder_lie
from src.services.verification.stages.stage import Stage
from src.utils.results import LemmaReport


class LemmaStage(Stage):
    """
    Structural checks on the grading, L′ and L₀.
    """

    name = "lemmas"

    def execute(self) -> None:
        table = self.context.table
        seed = self.context.options.seed
        scoped = self.context.in_scope

        reports = [
            check_bracket_onto(table),
            check_generated(table),
            check_transitive(self.context.lprime or table),
            check_irreducible(table, seed),
        ]
        if table.family == "H" and scoped:
            reports.append(check_H_pairing(table))
        if scoped:
            reports.append(check_simplicity_sample(table, seed))
            if table.family in ("S", "Stilde", "H"):
                reports.append(self._lie_spot_check())

        for report in reports:
            self.context.report.lemmas.append(LemmaRecord(**vars(report)))
            self.context.record(report.lemma, report.passed)

    def _lie_spot_check(self) -> LemmaReport:
        """
        L₀ is sl(n) or so(n): every biderivation of it is a multiple of the bracket.
        """
        problems = self.context.grading_problems
        if problems:
            return LemmaReport("lie_biderivations_inner", False, witness={"table_invariants": problems})
        zero_part = degree_zero_part(self.context.table)
        solution = solve_bder_lie(zero_part)
        report = LemmaReport(
            "lie_biderivations_inner",
            is_inner(solution),
            details={"dimension": zero_part.dim, "nullity": solution.total},
        )
        if not report.passed:
            report.witness = {"nullity": solution.total, "bracket_in_span": solution.bracket_in_span}
        return report

    def next_stage(self) -> None:
        return None
