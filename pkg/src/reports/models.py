from typing import Any, Literal

from pydantic import BaseModel, Field, model_validator

SCHEMA_VERSION = 1

Status = Literal["passed", "failed", "not_applicable", "incomplete"]
Verdict = Literal["verified", "failed", "incomplete"]


class DimensionRecord(BaseModel):
    """
    Dimension census of L and L′, with the graded pieces of L.
    """

    L: int
    Lprime: int | None = None
    L0: int
    top_degree: int
    degree_modulus: int | None = None
    per_degree: dict[str, int] = Field(default_factory=dict)
    per_parity: dict[str, int] = Field(default_factory=dict)
    distinct_weights: int = 0
    expected: dict[str, int] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _census_sums(self) -> "DimensionRecord":
        if self.per_degree and sum(self.per_degree.values()) != self.L:
            raise ValueError("Degree census does not add up to dim L")
        if self.per_parity and sum(self.per_parity.values()) != self.L:
            raise ValueError("Parity census does not add up to dim L")
        return self


class RootRecord(BaseModel):
    computed: int
    expected: int
    missing: list[str] = Field(default_factory=list)
    unexpected: list[str] = Field(default_factory=list)
    lprime_matches: bool = True
    passed: bool


class JacobiRecord(BaseModel):
    triples_checked: int
    passed: bool
    counterexample: list[str] | None = None
    residual: dict[str, str] | None = None


class DerivationRecord(BaseModel):
    field: str
    per_parity: dict[str, int] = Field(default_factory=dict)
    modular_field: str | None = None
    modular_per_parity: dict[str, int] = Field(default_factory=dict)
    dimension: int
    lprime_dimension: int
    ad_rank: int
    ad_inside: bool
    derivations_inner: bool
    outer: list[str] = Field(default_factory=list)
    witness: dict[str, Any] | None = None
    passed: bool


class BlockRecord(BaseModel):
    """
    One row of the biderivation block table.
    """

    parity: int
    weight: list[str]
    level: str
    degree: int
    unknowns: int
    rows_streamed: int
    rank: int
    nullity: int
    status: str
    epsilon: list[str] | None = None


class ResidualRecord(BaseModel):
    scale: int
    triples_checked: int
    passed: bool
    counterexample: list[str] | None = None


class FactorizationRecord(BaseModel):
    parity: int
    weight: list[str]
    degree: int
    status: str
    graded: bool | None = None
    message: str = ""


class BiderivationRecord(BaseModel):
    field: str
    parities: list[int]
    nullity: dict[str, int] = Field(default_factory=dict)
    unknowns: dict[str, int] = Field(default_factory=dict)
    bracket_in_span: bool | None = None
    inner: bool | None = None
    complete: bool
    witness: dict[str, Any] | None = None
    residuals: list[ResidualRecord] = Field(default_factory=list)
    factorizations: list[FactorizationRecord] = Field(default_factory=list)
    blocks: list[BlockRecord] = Field(default_factory=list)

    @model_validator(mode="after")
    def _block_totals(self) -> "BiderivationRecord":
        for parity, total in self.nullity.items():
            blocks = [block for block in self.blocks if str(block.parity) == parity]
            if blocks and sum(block.nullity for block in blocks) != total:
                raise ValueError(f"Block nullities of parity {parity} do not add up to {total}")
        return self


class CertificateRecord(BaseModel):
    prime: int
    even_nullity: int
    odd_nullity: int
    bracket_residual_zero: bool
    bracket_in_span: bool | None = None
    complete: bool
    valid: bool


class LemmaRecord(BaseModel):
    lemma: str
    passed: bool
    method: str
    witness: dict[str, Any] | None = None
    details: dict[str, Any] = Field(default_factory=dict)
    notes: str = ""

    @model_validator(mode="after")
    def _failure_has_witness(self) -> "LemmaRecord":
        if not self.passed and self.witness is None:
            raise ValueError(f"Failing check {self.lemma} carries no witness")
        return self


class VerificationReport(BaseModel):
    """
    Everything one CLI run established, in a schema-versioned document.

    predicates maps each acceptance predicate to its status; the verdict is
    their conjunction.
    """

    schema_version: int = SCHEMA_VERSION
    tool_version: str
    command: str
    family: str
    n: int
    field: str
    prime: int | None = None
    seed: int
    in_theorem_scope: bool
    dimensions: DimensionRecord | None = None
    roots: RootRecord | None = None
    jacobi: JacobiRecord | None = None
    derivations: DerivationRecord | None = None
    biderivations: BiderivationRecord | None = None
    certificates: list[CertificateRecord] = Field(default_factory=list)
    lemmas: list[LemmaRecord] = Field(default_factory=list)
    predicates: dict[str, Status] = Field(default_factory=dict)
    timings: dict[str, float] | None = None
    complete: bool = True
    verdict: Verdict = "verified"

    def record(self, predicate: str, status: Status) -> None:
        self.predicates[predicate] = status

    def conclude(self) -> Verdict:
        statuses = set(self.predicates.values())
        if "incomplete" in statuses:
            self.complete = False
        if "failed" in statuses:
            self.verdict = "failed"
        elif not self.complete:
            self.verdict = "incomplete"
        else:
            self.verdict = "verified"
        return self.verdict

    @property
    def exit_code(self) -> int:
        return {"verified": 0, "failed": 1, "incomplete": 3}[self.verdict]
