import logging
from dataclasses import dataclass
from functools import cached_property

from src import settings
from src.algebra.families import FAMILIES, FamilySpec, LprimeTable, in_theorem_scope
from src.algebra.superfields import AlgebraTable, verify_table_invariants
from src.linalg.fields import make_field
from src.reports.models import Status, VerificationReport
from src.services.verification.stages.stage import Stage
from src.utils.exceptions import FamilyError

# checks that only make sense under the hypotheses of the innerness theorems
THEOREM_CHECKS = frozenset(
    {
        "derivations_inner",
        "innerness",
        "certificate",
        "vanishing_off_inner_line",
        "factorization",
        "hamiltonian_pairing",
        "simplicity_sample",
        "lie_biderivations_inner",
    }
)
# checks that need the ℤ-grading of a Cartan-type family
GRADED_CHECKS = frozenset({"dimensions", "roots", "bracket_onto", "generation", "transitivity", "irreducibility"})

COMMANDS = ("info", "jacobi", "der", "bder", "lemmas")


def default_field_mode(family: str, n: int) -> str:
    """
    W(n) for n ≥ 4 is too large for exact elimination and goes to the F_p certificate.
    """
    return "modp" if family == "W" and n >= 4 else "exact"


@dataclass
class RunOptions:
    field: str = "exact"
    prime: int = settings.PRIME
    parity: str = "both"
    seed: int = settings.SEED
    block_limit: int = settings.BLOCK_LIMIT
    workers: int = settings.WORKERS
    retain: bool = True
    timings: bool = False
    progress: bool = settings.PROGRESS

    @property
    def parities(self) -> tuple[int, ...]:
        return {"even": (0,), "odd": (1,), "both": (0, 1)}[self.parity]


class VerificationRun:
    """
    Context of the verification pipeline.

    This class:
    - Implements the Context role in the State pattern
    - Holds the table under test, its L′ and the run options
    - Collects every stage's findings in one VerificationReport
    - Maps each check to a status, honouring theorem scope
    """

    def __init__(
        self,
        table: AlgebraTable,
        commands: tuple[str, ...],
        options: RunOptions | None = None,
        lprime: LprimeTable | None = None,
        command: str | None = None,
    ) -> None:
        self._logger = logging.getLogger(__name__)
        unknown = set(commands) - set(COMMANDS)
        if unknown:
            raise ValueError(f"Unknown commands: {', '.join(sorted(unknown))}")

        self.table = table
        self.lprime = lprime
        self.commands = tuple(commands)
        self.options = options or RunOptions()
        self.field = make_field(self.options.field, self.options.prime)
        self.is_family_table = table.family in FAMILIES
        self.in_scope = self._theorem_scope()
        self.report = VerificationReport(
            tool_version=settings.VERSION,
            command=command or "+".join(self.commands),
            family=table.family,
            n=table.n,
            field=repr(self.field),
            prime=self.field.modulus,
            seed=self.options.seed,
            in_theorem_scope=self.in_scope,
        )
        self._timings: dict[str, float] = {}
        self._finished = False
        self._stage: Stage | None = None

    def _theorem_scope(self) -> bool:
        if not self.is_family_table:
            return False
        try:
            return in_theorem_scope(FamilySpec(self.table.family, self.table.n))
        except FamilyError:
            return False

    @property
    def parities(self) -> tuple[int, ...]:
        return self.options.parities

    def transition_to(self, stage: Stage, auto_process: bool) -> None:
        """
        Transition to a new stage and optionally run it immediately.
        """
        self._logger.debug("Transition to %s", type(stage).__name__)
        self._stage = stage
        self._stage.context = self

        if auto_process:
            self._stage.process()

    def start(self) -> VerificationReport:
        from src.services.verification.stages.info_stage import InfoStage

        self.transition_to(InfoStage(), True)
        return self.report

    def status(self, check: str, passed: bool, complete: bool = True) -> Status:
        if check in THEOREM_CHECKS and not self.in_scope:
            return "not_applicable"
        if check in GRADED_CHECKS and not self.is_family_table:
            return "not_applicable"
        if not complete:
            return "incomplete"
        return "passed" if passed else "failed"

    def record(self, check: str, passed: bool, complete: bool = True) -> Status:
        status = self.status(check, passed, complete)
        self.report.record(check, status)
        if status == "failed":
            self._logger.error("Check %s failed for %s(%d)", check, self.table.family, self.table.n)
        return status

    @cached_property
    def grading_problems(self) -> list[str]:
        """
        Parity, degree and weight violations of the table. The block solvers
        index unknowns by these gradings and cannot run on a table that breaks them.
        """
        return verify_table_invariants(self.table, skew=False)

    def reject_broken_grading(self, checks: tuple[str, ...]) -> dict | None:
        """
        Fail table_invariants and the given checks when the gradings are broken.
        Returns the witness, or None when the solvers may run.
        """
        problems = self.grading_problems
        if not problems:
            return None
        self.record("table_invariants", False)
        for check in checks:
            self.report.record(check, "failed")
        self._logger.error(
            "%s(%d) breaks its gradings; %s not solved: %s",
            self.table.family,
            self.table.n,
            ", ".join(checks),
            problems[0],
        )
        return {"table_invariants": problems}

    def record_timing(self, stage: str, seconds: float) -> None:
        self._timings[stage] = round(seconds, 3)

    def finish(self) -> None:
        if self._finished:
            return
        self._finished = True
        if self.options.timings:
            self.report.timings = dict(self._timings)
        verdict = self.report.conclude()
        if not self.in_scope and self.is_family_table:
            self._logger.warning(
                "%s(%d) is outside the innerness theorems' hypotheses; theorem checks are not applicable",
                self.table.family,
                self.table.n,
            )
        self._logger.info("Run %s on %s(%d): %s", self.report.command, self.table.family, self.table.n, verdict)
