from src.algebra.families import compare_roots, expected_dimensions
from src.reports.models import DimensionRecord, RootRecord
from src.services.verification.stages.stage import Stage


class InfoStage(Stage):
    """
    Dimensions, gradings and the root system.

    Closed-form dimensions and the described root system are only known for
    the four families; loaded custom tables just get their census.
    """

    name = "info"

    def execute(self) -> None:
        table = self.context.table
        lprime = self.context.lprime

        expected = expected_dimensions(table.family, table.n) if self.context.is_family_table else {}
        dimensions = DimensionRecord(
            L=table.dim,
            Lprime=lprime.table.dim if lprime is not None else None,
            L0=len(table.indices_of_degree(0)),
            top_degree=table.top_degree,
            degree_modulus=table.degree_modulus,
            per_degree={str(degree): len(indices) for degree, indices in table.degree_components().items()},
            per_parity={str(parity): count for parity, count in sorted(table.parity_census().items())},
            distinct_weights=len(table.weight_census()),
            expected=expected,
        )
        self.context.report.dimensions = dimensions
        self.context.record(
            "dimensions",
            all(getattr(dimensions, key) == value for key, value in expected.items()),
        )

        if not self.context.is_family_table:
            self.context.record("roots", True)
            return

        comparison = compare_roots(table, lprime.table if lprime is not None else None)
        self.context.report.roots = RootRecord(
            computed=len(comparison.computed),
            expected=len(comparison.expected),
            missing=sorted(str(weight) for weight in comparison.missing),
            unexpected=sorted(str(weight) for weight in comparison.unexpected),
            lprime_matches=comparison.lprime_matches,
            passed=comparison.passed,
        )
        self.context.record("roots", comparison.passed)

    def next_stage(self) -> Stage:
        from src.services.verification.stages.jacobi_stage import JacobiStage

        return JacobiStage()
