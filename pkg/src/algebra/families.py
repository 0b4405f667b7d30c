import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Callable

from src.algebra.exterior import GrassmannPoly, indices_of, mask_of, mask_partial
from src.algebra.superfields import AlgebraTable, SuperVectorField, Weight, build_table, exact
from src.linalg.fields import RationalField
from src.linalg.sparse import SparseMatrix, nullspace
from src.utils.exceptions import FamilyError

logger = logging.getLogger(__name__)

FAMILIES = ("W", "S", "Stilde", "H")
AUXILIARY = ("Htilde",)


@dataclass(frozen=True)
class FamilySpec:
    """
    A Cartan-type family and its generator count, validated on creation.
    """

    family: str
    n: int
    lprime: bool = False

    def __post_init__(self) -> None:
        if self.family not in FAMILIES + AUXILIARY:
            raise FamilyError(f"Unknown family '{self.family}', expected one of {', '.join(FAMILIES)}")
        if self.n < 2:
            raise FamilyError(f"{self.family}(n) needs n >= 2, got {self.n}")
        if self.family == "Stilde" and self.n % 2:
            raise FamilyError(f"Stilde(n) needs n even, got {self.n}")
        if self.family in ("H", "Htilde") and self.n < 4:
            raise FamilyError(f"{self.family}(n) needs n >= 4, got {self.n}")

    @property
    def label(self) -> str:
        name = f"{self.family}({self.n})"
        return f"Lprime[{name}]" if self.lprime else name


def in_theorem_scope(spec: FamilySpec) -> bool:
    """
    Whether the simplicity hypotheses of the innerness theorems hold.
    """
    if spec.family in ("W", "S"):
        return spec.n >= 4
    if spec.family == "Stilde":
        return spec.n >= 4 and spec.n % 2 == 0
    if spec.family == "H":
        return spec.n > 4
    return False


def divergence(D: SuperVectorField) -> GrassmannPoly:
    terms: dict[int, int] = {}
    for (mask, i), value in D.items():
        sign, reduced = mask_partial(i, mask)
        if sign:
            terms[reduced] = terms.get(reduced, 0) + sign * value
    return GrassmannPoly(terms, D.n)


def grading_element(n: int) -> SuperVectorField:
    """
    C = Σ x_i ∂_i.
    """
    return SuperVectorField({(1 << (i - 1), i): 1 for i in range(1, n + 1)}, n)


def _w_elements(n: int) -> list[SuperVectorField]:
    elements = []
    for size in range(n + 1):
        for indices in combinations(range(1, n + 1), size):
            for i in range(1, n + 1):
                elements.append(SuperVectorField({(mask_of(indices), i): 1}, n))
    return elements


def _w_weight(mask: int, i: int, n: int) -> tuple[int, ...]:
    return tuple(((mask >> (j - 1)) & 1) - (1 if j == i else 0) for j in range(1, n + 1))


def _diagonal_index(basis: list[SuperVectorField], element: SuperVectorField) -> int:
    return next(index for index, candidate in enumerate(basis) if candidate == element)


def build_W(n: int) -> AlgebraTable:
    if n < 2:
        raise FamilyError(f"W(n) needs n >= 2, got {n}")
    basis = _w_elements(n)
    cartan = [_diagonal_index(basis, SuperVectorField({(1 << (i - 1), i): 1}, n)) for i in range(1, n + 1)]
    return build_table(basis, cartan, "W", n)


def _special_cartan(n: int) -> list[SuperVectorField]:
    return [
        SuperVectorField({(1 << (i - 1), i): 1, (1 << i, i + 1): -1}, n) for i in range(1, n)
    ]


def _special_elements(n: int) -> list[SuperVectorField]:
    """
    Divergence-free fields: per (degree, W-weight) block of W(n), the kernel
    of the divergence, scaled to primitive integer vectors.
    """
    blocks: dict[tuple[int, tuple[int, ...]], list[SuperVectorField]] = {}
    for element in _w_elements(n):
        (mask, i), = element.terms
        blocks.setdefault((mask.bit_count() - 1, _w_weight(mask, i, n)), []).append(element)

    field = RationalField()
    elements: list[SuperVectorField] = []
    for (degree, weight), members in blocks.items():
        if degree == 0 and not any(weight):
            elements.extend(_special_cartan(n))
            continue
        targets: dict[int, dict[int, int]] = {}
        for col, member in enumerate(members):
            for mask, value in divergence(member).items():
                targets.setdefault(mask, {})[col] = value
        matrix = SparseMatrix.from_rows([targets[mask] for mask in sorted(targets)], len(members), field)
        for vector in nullspace(matrix).vectors:
            leading = vector[min(vector)]
            sign = 1 if leading > 0 else -1
            combined = SuperVectorField.zero(n)
            for col, value in sorted(vector.items()):
                combined = combined + members[col] * (sign * value)
            elements.append(combined)
    elements.sort(key=_basis_order)
    return elements


def _basis_order(element: SuperVectorField) -> tuple:
    terms = sorted((mask.bit_count(), indices_of(mask), i) for mask, i in element.terms)
    return (element.degree, element.sort_key(), terms)


def build_S(n: int) -> AlgebraTable:
    if n < 2:
        raise FamilyError(f"S(n) needs n >= 2, got {n}")
    basis = _special_elements(n)
    cartan = [_diagonal_index(basis, h) for h in _special_cartan(n)]
    return build_table(basis, cartan, "S", n)


def top_form(n: int) -> GrassmannPoly:
    """
    ω = x_1 x_2 ⋯ x_n.
    """
    return GrassmannPoly({(1 << n) - 1: 1}, n)


def build_S_tilde(n: int) -> AlgebraTable:
    """
    (1 − ω)∂_i in degree −1 followed by the nonnegative part of S(n); ℤ_n-graded.
    """
    if n % 2 or n < 2:
        raise FamilyError(f"Stilde(n) needs an even n >= 2, got {n}")
    twist = GrassmannPoly.one(n) - top_form(n)
    basis = [SuperVectorField.derivation(i, n).multiply_left(twist) for i in range(1, n + 1)]
    basis += [element for element in _special_elements(n) if element.degree >= 0]
    cartan = [_diagonal_index(basis, h) for h in _special_cartan(n)]
    labels = [f"(1-ω)∂{i}" for i in range(1, n + 1)] + [repr(element) for element in basis[n:]]
    return build_table(basis, cartan, "Stilde", n, labels=labels, degree_modulus=n)


def prime_index(i: int, n: int) -> int:
    """
    The involution i ↦ i′ swapping i and i + r, r = ⌊n/2⌋, fixing n when n is odd.
    """
    if not 1 <= i <= n:
        raise ValueError(f"Index {i} outside 1..{n}")
    r = n // 2
    if i <= r:
        return i + r
    if i <= 2 * r:
        return i - r
    return i


def D_H(f: GrassmannPoly) -> SuperVectorField:
    """
    Hamiltonian field (−1)^{|f|} Σ ∂_i(f) ∂_{i′}, extended linearly over parities.
    """
    n = f.n
    terms: dict[tuple[int, int], int] = {}
    for mask, value in f.items():
        parity_sign = -1 if mask.bit_count() % 2 else 1
        for i in range(1, n + 1):
            sign, reduced = mask_partial(i, mask)
            if sign:
                key = (reduced, prime_index(i, n))
                terms[key] = terms.get(key, 0) + parity_sign * sign * value
    return SuperVectorField(terms, n)


def _hamiltonian_basis(n: int, sizes: range) -> tuple[list[SuperVectorField], list[str]]:
    basis, labels = [], []
    for size in sizes:
        for indices in combinations(range(1, n + 1), size):
            basis.append(D_H(GrassmannPoly({mask_of(indices): 1}, n)))
            labels.append("D_H(" + "".join(f"x{index}" for index in indices) + ")")
    return basis, labels


def build_H(n: int) -> AlgebraTable:
    if n < 4:
        raise FamilyError(f"H(n) needs n >= 4, got {n}")
    basis, labels = _hamiltonian_basis(n, range(1, n))
    return build_table(basis, _cartan_in_pair_order(basis, n), "H", n, labels=labels)


def build_H_tilde(n: int) -> AlgebraTable:
    if n < 4:
        raise FamilyError(f"Htilde(n) needs n >= 4, got {n}")
    basis, labels = _hamiltonian_basis(n, range(1, n + 1))
    return build_table(basis, _cartan_in_pair_order(basis, n), "Htilde", n, labels=labels)


def _cartan_in_pair_order(basis: list[SuperVectorField], n: int) -> list[int]:
    r = n // 2
    return [_diagonal_index(basis, D_H(GrassmannPoly.monomial((i, i + r), n))) for i in range(1, r + 1)]


@dataclass(frozen=True)
class LprimeTable:
    """
    L′ together with the embedding of L's basis (indices 0..dim L − 1) and
    the indices of the elements added on top of L.
    """

    table: AlgebraTable
    embedding: tuple[int, ...]
    outer: tuple[int, ...] = field(default=())


def build_Lprime(family: str, n: int) -> LprimeTable:
    """
    W, Stilde: L itself. S: S(n) ⊕ ℂC. H: H̃(n) ⊕ ℂC.
    """
    spec = FamilySpec(family, n)
    if family in ("W", "Stilde"):
        table = build_family(spec)
        return LprimeTable(table, tuple(range(table.dim)))

    if family == "S":
        base = build_S(n)
        basis = list(base.basis) + [grading_element(n)]
        labels = list(base.labels) + ["C"]
    elif family == "H":
        base = build_H(n)
        basis = list(base.basis) + [D_H(top_form(n)), grading_element(n)]
        labels = list(base.labels) + ["D_H(ω)", "C"]
    else:
        raise FamilyError(f"L′ is defined for {', '.join(FAMILIES)}, not {family}")

    table = build_table(basis, base.cartan_indices, f"Lprime-{family}", n, labels=labels)
    return LprimeTable(table, tuple(range(base.dim)), tuple(range(base.dim, table.dim)))


_BUILDERS: dict[str, Callable[[int], AlgebraTable]] = {
    "W": build_W,
    "S": build_S,
    "Stilde": build_S_tilde,
    "H": build_H,
    "Htilde": build_H_tilde,
}


def build_family(spec: FamilySpec) -> AlgebraTable:
    if spec.lprime:
        return build_Lprime(spec.family, spec.n).table
    return _BUILDERS[spec.family](spec.n)


def expected_dimensions(family: str, n: int) -> dict[str, int]:
    """
    dim L, dim L₀ and the top degree ξ by the closed formulas for each family.
    """
    if family == "W":
        return {"L": n * 2**n, "L0": n * n, "top_degree": n - 1}
    if family in ("S", "Stilde"):
        return {"L": (n - 1) * 2**n + 1, "L0": n * n - 1, "top_degree": n - 2}
    if family == "H":
        return {"L": 2**n - 2, "L0": n * (n - 1) // 2, "top_degree": n - 3}
    raise FamilyError(f"No dimension formulas for family {family}")


def degree_zero_part(table: AlgebraTable) -> AlgebraTable:
    """
    L₀ as a table in its own right (gl(n), sl(n), so(n) for the four families).
    """
    return table.subalgebra(table.indices_of_degree(0), family=f"{table.family}_0")


def epsilon_projection(family: str, n: int) -> Callable[[tuple[int, ...]], Weight]:
    """
    Map a weight written in ε_1..ε_n coordinates to Cartan-eigenvalue coordinates.
    """
    r = n // 2
    if family == "W":
        return lambda k: Weight(tuple(k))
    if family in ("S", "Stilde"):
        return lambda k: Weight(tuple(k[j] - k[j + 1] for j in range(n - 1)))
    if family in ("H", "Htilde"):
        return lambda k: Weight(tuple(k[j + r] - k[j] for j in range(r)))
    raise FamilyError(f"No ε-coordinates for family {family}")


def epsilon_lift(family: str, n: int, weight: Weight, degree: int) -> tuple:
    """
    ε-coordinates of a homogeneous shift, inverse to epsilon_projection.

    S and Stilde only see the differences k_j − k_{j+1}; the multiple of
    ε_1 + ⋯ + ε_n is fixed by l(ε) = degree, which holds for every x^u∂_i.
    Stilde knows its degree mod n and takes the representative of least
    absolute value. For H the Cartan coordinates are the coefficients of
    ε_{r+1}, …, ε_{2r}.
    """
    coords = weight.coords
    if family == "W":
        return tuple(coords)
    if family in ("H", "Htilde"):
        r = n // 2
        k = [0] * n
        for j in range(r):
            k[j + r] = coords[j]
        return tuple(k)
    if family in ("S", "Stilde"):
        k = [0] * n
        for j in range(n - 2, -1, -1):
            k[j] = exact(coords[j] + k[j + 1])
        level = degree
        if family == "Stilde":
            level = min(degree % n, degree % n - n, key=abs)
        shift = Fraction(level - sum(k), n)
        return tuple(exact(value + shift) for value in k)
    raise FamilyError(f"No ε-coordinates for family {family}")


def expected_roots(family: str, n: int) -> set[Weight]:
    """
    The root system described in ε-coordinates, converted to Cartan
    coordinates, with the zero weight excluded.
    """
    if family in ("H", "Htilde"):
        r = n // 2
        return {Weight(signs) for signs in product((-1, 0, 1), repeat=r) if any(signs)}

    project = epsilon_projection(family, n)
    expected = set()
    for size in range(n + 1):
        for indices in combinations(range(1, n + 1), size):
            for i in range(1, n + 1):
                k = tuple((1 if j in indices else 0) - (1 if j == i else 0) for j in range(1, n + 1))
                if family in ("S", "Stilde") and size == n:
                    # ε_1 + ⋯ + ε_n − ε_i are removed
                    continue
                weight = project(k)
                if not weight.is_zero():
                    expected.add(weight)
    return expected


def roots(table: AlgebraTable) -> set[Weight]:
    """
    Nonzero weights of basis vectors outside the Cartan subalgebra.
    """
    cartan = set(table.cartan_indices)
    return {
        weight for index, weight in enumerate(table.weights) if index not in cartan and not weight.is_zero()
    }


@dataclass
class RootComparison:
    computed: set[Weight]
    expected: set[Weight]
    lprime_roots: set[Weight] | None = None

    @property
    def missing(self) -> set[Weight]:
        return self.expected - self.computed

    @property
    def unexpected(self) -> set[Weight]:
        return self.computed - self.expected

    @property
    def lprime_matches(self) -> bool:
        return self.lprime_roots is None or self.lprime_roots == self.computed

    @property
    def passed(self) -> bool:
        return not self.missing and not self.unexpected and self.lprime_matches


def compare_roots(table: AlgebraTable, lprime: AlgebraTable | None = None) -> RootComparison:
    comparison = RootComparison(
        roots(table),
        expected_roots(table.family, table.n),
        roots(lprime) if lprime is not None else None,
    )
    if not comparison.passed:
        logger.error(
            "Root system mismatch for %s(%d): %d missing, %d unexpected",
            table.family,
            table.n,
            len(comparison.missing),
            len(comparison.unexpected),
        )
    return comparison
