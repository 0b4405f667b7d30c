from src.algebra.superfields import check_super_jacobi, verify_table_invariants
from src.reports.models import JacobiRecord
from src.services.verification.stages.stage import Stage


class JacobiStage(Stage):
    name = "jacobi"

    def execute(self) -> None:
        table = self.context.table

        problems = verify_table_invariants(table)
        for problem in problems:
            self._logger.error("Table invariant violated: %s", problem)
        self.context.record("table_invariants", not problems)

        jacobi = check_super_jacobi(table)
        record = JacobiRecord(triples_checked=jacobi.triples_checked, passed=jacobi.passed)
        if not jacobi.passed:
            record.counterexample = [table.labels[index] for index in jacobi.counterexample]
            record.residual = {table.labels[m]: str(value) for m, value in sorted(jacobi.residual.items())}
        self.context.report.jacobi = record
        self.context.record("super_jacobi", jacobi.passed)

    def next_stage(self) -> Stage:
        from src.services.verification.stages.derivation_stage import DerivationStage

        return DerivationStage()
