from dataclasses import dataclass, field
from typing import Any

from src.algebra.superfields import Weight, exact

Triple = tuple[int, int, int]


@dataclass
class BlockResult:
    """
    Data container for one (parity, weight, degree) block of the
    biderivation equations.

    Stores the block's size, how many rows were streamed before the
    elimination finished, and the resulting rank and nullity.
    """

    parity: int
    weight: Weight
    degree: int
    unknowns: int
    rows_streamed: int = 0
    rank: int = 0
    lower_bound: int = 0
    status: str = "pending"
    basis: list[dict[Triple, Any]] = field(default_factory=list)
    epsilon: tuple | None = None

    @property
    def nullity(self) -> int:
        return self.unknowns - self.rank

    @property
    def level(self):
        """
        l(ε) of the block's weight shift, read off its ε-coordinates when known.
        """
        if self.epsilon is None:
            return self.weight.level()
        return exact(sum(self.epsilon, 0))

    @property
    def is_inner_line(self) -> bool:
        return self.weight.is_zero() and self.degree == 0

    @property
    def solved(self) -> bool:
        return self.status == "solved"


@dataclass
class BiderSolution:
    """
    All blocks of one parity, merged in block order.
    """

    parity: int
    field: str
    blocks: list[BlockResult] = field(default_factory=list)
    bracket_in_span: bool | None = None

    @property
    def total(self) -> int:
        return sum(block.nullity for block in self.blocks)

    @property
    def unknowns(self) -> int:
        return sum(block.unknowns for block in self.blocks)

    @property
    def complete(self) -> bool:
        return all(block.solved for block in self.blocks)

    @property
    def off_inner_line_vanishes(self) -> bool:
        return all(block.nullity == 0 for block in self.blocks if not block.is_inner_line)

    def retained(self) -> list[tuple[BlockResult, dict[Triple, Any]]]:
        return [(block, vector) for block in self.blocks for vector in block.basis]


@dataclass
class DerivationSolution:
    """
    Superderivations of one parity as dim × dim coordinate maps, keyed (k, m)
    for the coefficient of e_m in D(e_k).
    """

    parity: int
    field: str
    basis: list[dict[tuple[int, int], Any]] = field(default_factory=list)
    unknowns: int = 0
    blocks: int = 0

    @property
    def dimension(self) -> int:
        return len(self.basis)


@dataclass
class DerivationClassification:
    dimension: int = 0
    lprime_dimension: int = 0
    ad_rank: int = 0
    ad_inside: bool = False
    derivations_inner: bool = False
    outer: list[str] = field(default_factory=list)
    witness: dict | None = None

    @property
    def ad_injective(self) -> bool:
        return self.ad_rank == self.lprime_dimension

    @property
    def passed(self) -> bool:
        return self.ad_inside and self.derivations_inner and self.ad_injective and self.dimension == self.ad_rank


@dataclass
class FactorizationResult:
    """
    Maps φ, ψ : L → L′ with f(x, y) = [φ(x), y] = [x, ψ(y)], each given as
    a → coordinate vector in L′.
    """

    phi: dict[int, dict[int, Any]] = field(default_factory=dict)
    psi: dict[int, dict[int, Any]] = field(default_factory=dict)
    status: str = "pending"
    message: str = ""
    graded: bool | None = None

    @property
    def success(self) -> bool:
        return self.status == "success"


@dataclass
class InnerResidual:
    """
    Evaluation of λ·[ , ] on both biderivation identities over every basis triple.
    """

    scale: int = 1
    triples_checked: int = 0
    counterexample: tuple[str, int, int, int] | None = None
    residual: dict[int, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.counterexample is None


@dataclass
class Certificate:
    """
    Modular certificate: F_p nullities (1, 0) together with an exact bracket
    witness pin the rational dimensions to (1, 0).
    """

    prime: int
    even_nullity: int
    odd_nullity: int
    bracket_residual_zero: bool
    bracket_in_span: bool | None
    complete: bool
    blocks: list[BlockResult] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return (
            self.complete
            and self.bracket_residual_zero
            and bool(self.bracket_in_span)
            and self.even_nullity == 1
            and self.odd_nullity == 0
        )


@dataclass
class LemmaReport:
    """
    Outcome of one structural check. A failing report always carries a witness.
    """

    lemma: str
    passed: bool
    method: str = "exact"
    witness: dict | None = None
    details: dict = field(default_factory=dict)
    notes: str = ""
