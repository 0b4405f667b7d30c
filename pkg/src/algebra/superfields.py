import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from src.algebra.exterior import GrassmannPoly, Scalar, indices_of, mask_mul, mask_partial
from src.utils.exceptions import TableConstructionError

logger = logging.getLogger(__name__)

Vector = dict[int, Scalar]


def exact(value: Scalar) -> Scalar:
    """
    Canonical exact scalar: integral values become ints.
    """
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return value


class SuperVectorField:
    """
    An element Σ f_i ∂_i of W(n), stored term by term as (mask, i) -> coefficient,
    where (mask, i) stands for x_mask ∂_i.
    """

    __slots__ = ("_terms", "n")

    def __init__(self, terms: Mapping[tuple[int, int], Scalar], n: int) -> None:
        self.n = n
        cleaned = {}
        for (mask, i), value in terms.items():
            if not 1 <= i <= n or mask >> n:
                raise ValueError(f"Term x{mask:b}∂{i} lies outside W({n})")
            if value:
                cleaned[(mask, i)] = Fraction(value)
        self._terms = cleaned

    @classmethod
    def zero(cls, n: int) -> "SuperVectorField":
        return cls({}, n)

    @classmethod
    def from_components(cls, components: Mapping[int, GrassmannPoly], n: int) -> "SuperVectorField":
        terms = {}
        for i, poly in components.items():
            for mask, value in poly.items():
                terms[(mask, i)] = value
        return cls(terms, n)

    @classmethod
    def term(cls, indices: Iterable[int], i: int, n: int, coefficient: Scalar = 1) -> "SuperVectorField":
        """
        coefficient · x_I ∂_i, with x_I sorted into canonical order.
        """
        return cls.from_components({i: GrassmannPoly.monomial(indices, n, coefficient)}, n)

    @classmethod
    def derivation(cls, i: int, n: int) -> "SuperVectorField":
        return cls({(0, i): 1}, n)

    @property
    def terms(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[tuple[int, int], Fraction]]:
        return iter(self._terms.items())

    def components(self) -> dict[int, GrassmannPoly]:
        grouped: dict[int, dict[int, Fraction]] = defaultdict(dict)
        for (mask, i), value in self._terms.items():
            grouped[i][mask] = value
        return {i: GrassmannPoly(terms, self.n) for i, terms in sorted(grouped.items())}

    @property
    def degrees(self) -> set[int]:
        return {mask.bit_count() - 1 for mask, _ in self._terms}

    @property
    def degree(self) -> int | None:
        degrees = self.degrees
        return degrees.pop() if len(degrees) == 1 else None

    @property
    def parity(self) -> int | None:
        parities = {(mask.bit_count() + 1) % 2 for mask, _ in self._terms}
        return parities.pop() if len(parities) == 1 else None

    def degree_component(self, degree: int) -> "SuperVectorField":
        return SuperVectorField(
            {key: value for key, value in self._terms.items() if key[0].bit_count() - 1 == degree},
            self.n,
        )

    def parity_component(self, parity: int) -> "SuperVectorField":
        return SuperVectorField(
            {key: value for key, value in self._terms.items() if (key[0].bit_count() + 1) % 2 == parity},
            self.n,
        )

    def multiply_left(self, f: GrassmannPoly) -> "SuperVectorField":
        """
        f · D, the field with components f·f_i.
        """
        terms: dict[tuple[int, int], Fraction] = {}
        for a, alpha in f.items():
            for (b, i), beta in self._terms.items():
                sign, mask = mask_mul(a, b)
                if sign:
                    terms[(mask, i)] = terms.get((mask, i), 0) + sign * alpha * beta
        return SuperVectorField(terms, self.n)

    def sort_key(self) -> tuple:
        """
        Basis ordering key: degree, then index set, then ∂-index of the leading term.
        """
        return min((mask.bit_count(), indices_of(mask), i) for mask, i in self._terms)

    def __add__(self, other: "SuperVectorField") -> "SuperVectorField":
        if other.n != self.n:
            raise ValueError(f"W({self.n}) and W({other.n}) elements cannot be combined")
        terms = self.terms
        for key, value in other.items():
            terms[key] = terms.get(key, 0) + value
        return SuperVectorField(terms, self.n)

    def __neg__(self) -> "SuperVectorField":
        return self * -1

    def __sub__(self, other: "SuperVectorField") -> "SuperVectorField":
        return self + (-other)

    def __mul__(self, scalar: Scalar) -> "SuperVectorField":
        return SuperVectorField({key: scalar * value for key, value in self._terms.items()}, self.n)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SuperVectorField):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self._terms.items())))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mask, i in sorted(self._terms, key=lambda key: (key[0].bit_count(), indices_of(key[0]), key[1])):
            value = self._terms[(mask, i)]
            monomial = "".join(f"x{index}" for index in indices_of(mask))
            prefix = "" if value == 1 else ("-" if value == -1 else f"{value}*")
            parts.append(f"{prefix}{monomial}∂{i}")
        return " + ".join(parts).replace("+ -", "- ")


def apply(D: SuperVectorField, g: GrassmannPoly) -> GrassmannPoly:
    """
    Action of D = Σ f_i ∂_i on Λ(n): Σ f_i · ∂_i(g).
    """
    if D.n != g.n:
        raise ValueError(f"W({D.n}) cannot act on Λ({g.n})")
    terms: dict[int, Fraction] = {}
    for (f, i), alpha in D.items():
        for mask, beta in g.items():
            sign, reduced = mask_partial(i, mask)
            if not sign:
                continue
            sign_mul, product = mask_mul(f, reduced)
            if sign_mul:
                terms[product] = terms.get(product, 0) + sign * sign_mul * alpha * beta
    return GrassmannPoly(terms, g.n)


def vf_bracket(D: SuperVectorField, E: SuperVectorField) -> SuperVectorField:
    """
    Supercommutator [D, E], extended bilinearly from homogeneous terms:
    [f∂_a, g∂_b] = f·∂_a(g)∂_b − (−1)^{|f∂_a||g∂_b|} g·∂_b(f)∂_a.
    """
    if D.n != E.n:
        raise ValueError(f"W({D.n}) and W({E.n}) elements cannot be bracketed")
    terms: dict[tuple[int, int], Fraction] = {}
    for (f, a), alpha in D.items():
        parity_d = (f.bit_count() + 1) % 2
        for (g, b), beta in E.items():
            parity_e = (g.bit_count() + 1) % 2
            sign, reduced = mask_partial(a, g)
            if sign:
                sign_mul, product = mask_mul(f, reduced)
                if sign_mul:
                    key = (product, b)
                    terms[key] = terms.get(key, 0) + sign * sign_mul * alpha * beta
            sign, reduced = mask_partial(b, f)
            if sign:
                sign_mul, product = mask_mul(g, reduced)
                if sign_mul:
                    koszul = -1 if parity_d and parity_e else 1
                    key = (product, a)
                    terms[key] = terms.get(key, 0) - koszul * sign * sign_mul * alpha * beta
    return SuperVectorField(terms, D.n)


@dataclass(frozen=True)
class Weight:
    """
    Eigenvalue tuple of a basis element under the chosen Cartan basis.
    """

    coords: tuple[Scalar, ...]

    @classmethod
    def zero(cls, rank: int) -> "Weight":
        return cls((0,) * rank)

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(tuple(exact(a + b) for a, b in zip(self.coords, other.coords, strict=True)))

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(tuple(exact(a - b) for a, b in zip(self.coords, other.coords, strict=True)))

    def __neg__(self) -> "Weight":
        return Weight(tuple(-a for a in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def level(self) -> Scalar:
        """
        l(ε): the coordinate sum.
        """
        return exact(sum(self.coords, 0))

    def __str__(self) -> str:
        return "(" + ", ".join(str(a) for a in self.coords) + ")"


class WeightCodec:
    """
    Packs weights into ints with a balanced positional code so that sums and
    differences of up to `spread` weights encode additively.
    """

    def __init__(self, weights: Iterable[Weight], spread: int = 4) -> None:
        weights = list(weights)
        self.rank = len(weights[0].coords) if weights else 0
        denominators = [
            value.denominator for weight in weights for value in weight.coords if isinstance(value, Fraction)
        ]
        self.scale = math.lcm(*denominators) if denominators else 1
        bound = max((abs(value * self.scale) for weight in weights for value in weight.coords), default=0)
        self.base = 2 * spread * max(int(bound), 1) + 1

    def encode(self, weight: Weight) -> int:
        code = 0
        for value in reversed(weight.coords):
            code = code * self.base + int(value * self.scale)
        return code

    def decode(self, code: int) -> Weight:
        half = self.base // 2
        coords = []
        for _ in range(self.rank):
            digit = (code + half) % self.base - half
            coords.append(exact(Fraction(digit, self.scale)))
            code = (code - digit) // self.base
        return Weight(tuple(coords))


class AlgebraTable:
    """
    A finite-dimensional Lie superalgebra given by structure constants.

    structure[(a, b)] is the sparse coordinate vector of [e_a, e_b]; only
    nonzero constants are stored. Degrees are integers, compared modulo
    degree_modulus when it is set. Instances are not mutated after
    construction; derived indexes are computed lazily.
    """

    def __init__(
        self,
        family: str,
        n: int,
        parity: Sequence[int],
        zdegree: Sequence[int],
        structure: Mapping[tuple[int, int], Mapping[int, Scalar]],
        weights: Sequence[Weight] | None = None,
        cartan_indices: Sequence[int] = (),
        basis: Sequence[SuperVectorField] = (),
        labels: Sequence[str] | None = None,
        degree_modulus: int | None = None,
    ) -> None:
        self.family = family
        self.n = n
        self.parity = tuple(int(p) % 2 for p in parity)
        self.zdegree = tuple(int(d) for d in zdegree)
        if len(self.zdegree) != len(self.parity):
            raise TableConstructionError("Parity and degree vectors differ in length")
        self.structure: dict[tuple[int, int], dict[int, Scalar]] = {}
        for pair, coefficients in structure.items():
            cleaned = {k: exact(c) for k, c in coefficients.items() if c}
            if cleaned:
                self.structure[pair] = cleaned
        self.cartan_indices = tuple(cartan_indices)
        self.weights = tuple(weights) if weights is not None else tuple(
            Weight.zero(len(self.cartan_indices)) for _ in self.parity
        )
        self.basis = tuple(basis)
        self.labels = tuple(labels) if labels is not None else tuple(f"e{k}" for k in range(self.dim))
        self.degree_modulus = degree_modulus

    @classmethod
    def from_structure_constants(
        cls,
        dim: int,
        structure: Mapping[tuple[int, int], Mapping[int, Scalar]],
        parity: Sequence[int] | None = None,
        zdegree: Sequence[int] | None = None,
        cartan_indices: Sequence[int] = (),
        family: str = "custom",
        n: int = 0,
        labels: Sequence[str] | None = None,
        degree_modulus: int | None = None,
    ) -> "AlgebraTable":
        """
        Abstract table without a vector-field realization; weights are read
        off the Cartan elements, which must act diagonally.
        """
        parity = parity if parity is not None else (0,) * dim
        zdegree = zdegree if zdegree is not None else (0,) * dim
        for (a, b), coefficients in structure.items():
            if not (0 <= a < dim and 0 <= b < dim) or any(not 0 <= k < dim for k in coefficients):
                raise TableConstructionError(f"Structure constant index out of range at pair {(a, b)}", pair=(a, b))
        weights = diagonal_weights(dim, structure, cartan_indices)
        return cls(family, n, parity, zdegree, structure, weights, cartan_indices, (), labels, degree_modulus)

    @property
    def dim(self) -> int:
        return len(self.parity)

    @property
    def top_degree(self) -> int:
        return max(self.zdegree, default=0)

    @property
    def rank(self) -> int:
        return len(self.cartan_indices)

    def degree_key(self, degree: int) -> int:
        return degree % self.degree_modulus if self.degree_modulus else degree

    def constants(self, a: int, b: int) -> Mapping[int, Scalar]:
        """
        Coordinates of [e_a, e_b]; the returned mapping must not be modified.
        """
        return self.structure.get((a, b), _EMPTY)

    def bracket(self, u: Mapping[int, Scalar], v: Mapping[int, Scalar]) -> Vector:
        result: Vector = {}
        for a, alpha in u.items():
            for b, beta in v.items():
                for k, c in self.structure.get((a, b), _EMPTY).items():
                    result[k] = result.get(k, 0) + alpha * beta * c
        return {k: exact(value) for k, value in result.items() if value}

    def ad_columns(self, u: Mapping[int, Scalar]) -> dict[int, Vector]:
        """
        ad(u) as columns: b -> [u, e_b].
        """
        columns = {}
        for b in range(self.dim):
            image = self.bracket(u, {b: 1})
            if image:
                columns[b] = image
        return columns

    def vector_parity(self, vector: Mapping[int, Scalar]) -> int | None:
        parities = {self.parity[k] for k, value in vector.items() if value}
        return parities.pop() if len(parities) == 1 else None

    def degree_components(self) -> dict[int, list[int]]:
        components: dict[int, list[int]] = defaultdict(list)
        for index, degree in enumerate(self.zdegree):
            components[degree].append(index)
        return dict(sorted(components.items()))

    def indices_of_degree(self, degree: int) -> list[int]:
        key = self.degree_key(degree)
        return [index for index, d in enumerate(self.zdegree) if self.degree_key(d) == key]

    def parity_census(self) -> Counter:
        return Counter(self.parity)

    def weight_census(self) -> Counter:
        return Counter(self.weights)

    def is_abelian(self) -> bool:
        return not self.structure

    @cached_property
    def left_into(self) -> dict[tuple[int, int], list[tuple[int, Scalar]]]:
        """
        (x, m) -> [(j, c_xj^m)]: which e_j bracket with e_x on the left into e_m.
        """
        index: dict[tuple[int, int], list[tuple[int, Scalar]]] = defaultdict(list)
        for (x, j), coefficients in sorted(self.structure.items()):
            for m, c in coefficients.items():
                index[(x, m)].append((j, c))
        return dict(index)

    @cached_property
    def right_into(self) -> dict[tuple[int, int], list[tuple[int, Scalar]]]:
        """
        (y, m) -> [(j, c_jy^m)]: which e_j bracket with e_y on the right into e_m.
        """
        index: dict[tuple[int, int], list[tuple[int, Scalar]]] = defaultdict(list)
        for (j, y), coefficients in sorted(self.structure.items()):
            for m, c in coefficients.items():
                index[(y, m)].append((j, c))
        return dict(index)

    def subalgebra(self, indices: Sequence[int], family: str | None = None) -> "AlgebraTable":
        """
        Restrict to the span of the given basis elements, which must be closed
        under the bracket. Cartan elements inside the span are kept.
        """
        position = {index: new for new, index in enumerate(indices)}
        structure = {}
        for a in indices:
            for b in indices:
                coefficients = self.structure.get((a, b))
                if not coefficients:
                    continue
                missing = [k for k in coefficients if k not in position]
                if missing:
                    raise TableConstructionError(
                        f"Bracket [{self.labels[a]}, {self.labels[b]}] leaves the span", pair=(a, b)
                    )
                structure[(position[a], position[b])] = {position[k]: c for k, c in coefficients.items()}
        cartan = [position[h] for h in self.cartan_indices if h in position]
        sub = AlgebraTable(
            family or f"{self.family}-sub",
            self.n,
            [self.parity[k] for k in indices],
            [self.zdegree[k] for k in indices],
            structure,
            diagonal_weights(len(indices), structure, cartan),
            cartan,
            [self.basis[k] for k in indices] if self.basis else (),
            [self.labels[k] for k in indices],
            self.degree_modulus,
        )
        return sub

    def perturbed(self, a: int, b: int, k: int, delta: Scalar = 1) -> "AlgebraTable":
        """
        Copy with c_ab^k shifted by delta and nothing re-verified.
        """
        structure = {pair: dict(coefficients) for pair, coefficients in self.structure.items()}
        coefficients = structure.setdefault((a, b), {})
        coefficients[k] = coefficients.get(k, 0) + delta
        return AlgebraTable(
            self.family,
            self.n,
            self.parity,
            self.zdegree,
            structure,
            self.weights,
            self.cartan_indices,
            self.basis,
            self.labels,
            self.degree_modulus,
        )

    def expand(self, vector: Mapping[int, Scalar]) -> SuperVectorField:
        """
        Realize a coordinate vector as a vector field (tables built from fields only).
        """
        if not self.basis:
            raise ValueError(f"Table {self.family} has no vector-field basis")
        result = SuperVectorField.zero(self.n)
        for index, value in vector.items():
            result = result + self.basis[index] * value
        return result

    def __repr__(self) -> str:
        return f"AlgebraTable({self.family}, n={self.n}, dim={self.dim})"


_EMPTY: Mapping[int, Scalar] = {}


def diagonal_weights(
    dim: int, structure: Mapping[tuple[int, int], Mapping[int, Scalar]], cartan: Sequence[int]
) -> tuple[Weight, ...]:
    """
    Eigenvalues of ad(h) for each Cartan element h on each basis element.
    """
    for h in cartan:
        for g in cartan:
            if any(structure.get((h, g), _EMPTY).values()):
                raise TableConstructionError(f"Cartan elements {h} and {g} do not commute", pair=(h, g))
    coords: list[list[Scalar]] = [[] for _ in range(dim)]
    for h in cartan:
        for b in range(dim):
            image = {k: c for k, c in structure.get((h, b), _EMPTY).items() if c}
            if set(image) - {b}:
                raise TableConstructionError(f"Cartan element {h} does not act diagonally on {b}", pair=(h, b))
            coords[b].append(exact(Fraction(image.get(b, 0))))
    return tuple(Weight(tuple(c)) for c in coords)


class _Coordinatizer:
    """
    Echelon form of the basis in ambient W(n) term coordinates, with each
    pivot row carrying its expression in the basis.
    """

    def __init__(self, basis: Sequence[SuperVectorField]) -> None:
        self._pivots: dict[tuple[int, int], tuple[dict, dict]] = {}
        for index, element in enumerate(basis):
            vector, combination = self._reduce(element.terms, {index: Fraction(1)})
            if not vector:
                raise TableConstructionError(f"Basis element {index} ({element!r}) is linearly dependent")
            lead = min(vector)
            scale = 1 / vector[lead]
            self._pivots[lead] = (
                {key: value * scale for key, value in vector.items()},
                {key: value * scale for key, value in combination.items()},
            )

    def _reduce(self, vector: dict, combination: dict) -> tuple[dict, dict]:
        vector = dict(vector)
        combination = dict(combination)
        while vector:
            lead = min(vector)
            pivot = self._pivots.get(lead)
            if pivot is None:
                break
            factor = vector[lead]
            row, row_combination = pivot
            for target, source in ((vector, row), (combination, row_combination)):
                for key, value in source.items():
                    updated = target.get(key, 0) - factor * value
                    if updated:
                        target[key] = updated
                    else:
                        target.pop(key, None)
        return vector, combination

    def coordinates(self, element: SuperVectorField) -> Vector | None:
        vector, combination = self._reduce(element.terms, {})
        if vector:
            return None
        return {index: exact(-value) for index, value in sorted(combination.items())}


def build_table(
    basis: Sequence[SuperVectorField],
    cartan: Sequence[int],
    family: str,
    n: int,
    labels: Sequence[str] | None = None,
    degree_modulus: int | None = None,
) -> AlgebraTable:
    """
    Coordinatize all brackets of basis pairs and assemble a verified table.

    Raises TableConstructionError on non-closure (naming the pair), on a
    non-diagonal Cartan action and on any violated table invariant.
    """
    coordinatizer = _Coordinatizer(basis)
    parity = []
    zdegree = []
    for index, element in enumerate(basis):
        if element.parity is None:
            raise TableConstructionError(f"Basis element {index} ({element!r}) is not ℤ₂-homogeneous")
        degrees = element.degrees
        keys = {d % degree_modulus if degree_modulus else d for d in degrees}
        if len(keys) != 1:
            raise TableConstructionError(f"Basis element {index} ({element!r}) is not ℤ-homogeneous")
        parity.append(element.parity)
        zdegree.append(min(degrees))

    names = list(labels) if labels is not None else [repr(element) for element in basis]
    structure: dict[tuple[int, int], Vector] = {}
    for a, left in enumerate(basis):
        for b, right in enumerate(basis):
            image = vf_bracket(left, right)
            if not image:
                continue
            coordinates = coordinatizer.coordinates(image)
            if coordinates is None:
                raise TableConstructionError(
                    f"Bracket [{names[a]}, {names[b]}] = {image!r} escapes the span of the basis",
                    pair=(a, b),
                )
            structure[(a, b)] = coordinates

    weights = diagonal_weights(len(basis), structure, cartan)
    table = AlgebraTable(family, n, parity, zdegree, structure, weights, cartan, basis, names, degree_modulus)
    problems = verify_table_invariants(table)
    if problems:
        raise TableConstructionError(f"{family}({n}) violates table invariants: {problems[0]}")
    logger.debug("Built %s(%d): dim %d, %d nonzero brackets", family, n, table.dim, len(structure))
    return table


def verify_table_invariants(table: AlgebraTable, limit: int = 10, skew: bool = True) -> list[str]:
    """
    Super-skew-symmetry, parity additivity, grading and weight additivity.

    Returns at most `limit` descriptions of violations; an empty list means
    the table is consistent. With skew=False only the three gradings are
    checked, which is what the block solvers rely on.
    """
    problems: list[str] = []
    P, D, W = table.parity, table.zdegree, table.weights
    pairs = set(table.structure)
    pairs |= {(b, a) for a, b in pairs}
    for a, b in sorted(pairs):
        forward = table.constants(a, b)
        backward = table.constants(b, a)
        sign = -1 if P[a] and P[b] else 1
        if skew:
            for k in set(forward) | set(backward):
                if backward.get(k, 0) != -sign * forward.get(k, 0):
                    problems.append(f"super-skew-symmetry fails for ({a}, {b}) at {k}")
        for k in forward:
            if P[k] != (P[a] + P[b]) % 2:
                problems.append(f"parity of [{a}, {b}] has a component on {k}")
            if table.degree_key(D[k]) != table.degree_key(D[a] + D[b]):
                problems.append(f"degree of [{a}, {b}] has a component on {k}")
            if W[k] != W[a] + W[b]:
                problems.append(f"weight of [{a}, {b}] has a component on {k}")
        if len(problems) >= limit:
            break
    return problems[:limit]


@dataclass
class JacobiReport:
    """
    Outcome of the exhaustive super-Jacobi check.
    """

    triples_checked: int = 0
    counterexample: tuple[int, int, int] | None = None
    residual: dict[int, Scalar] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.counterexample is None


def _bracket_left(table: AlgebraTable, a: int, vector: Mapping[int, Scalar], out: dict, scale: Scalar) -> None:
    structure = table.structure
    for k, value in vector.items():
        for m, c in structure.get((a, k), _EMPTY).items():
            out[m] = out.get(m, 0) + scale * value * c


def _bracket_right(table: AlgebraTable, vector: Mapping[int, Scalar], b: int, out: dict, scale: Scalar) -> None:
    structure = table.structure
    for k, value in vector.items():
        for m, c in structure.get((k, b), _EMPTY).items():
            out[m] = out.get(m, 0) + scale * value * c


def check_super_jacobi(table: AlgebraTable) -> JacobiReport:
    """
    [x,[y,z]] = [[x,y],z] + (−1)^{|x||y|}[y,[x,z]] for all basis triples.
    """
    report = JacobiReport()
    P = table.parity
    dim = table.dim
    for x in range(dim):
        for y in range(dim):
            xy = table.constants(x, y)
            sign = -1 if P[x] and P[y] else 1
            for z in range(dim):
                report.triples_checked += 1
                residual: dict[int, Scalar] = {}
                _bracket_left(table, x, table.constants(y, z), residual, 1)
                _bracket_right(table, xy, z, residual, -1)
                _bracket_left(table, y, table.constants(x, z), residual, -sign)
                residual = {m: value for m, value in residual.items() if value}
                if residual:
                    report.counterexample = (x, y, z)
                    report.residual = residual
                    logger.error(
                        "Super-Jacobi fails for %s on (%s, %s, %s)",
                        table.family,
                        table.labels[x],
                        table.labels[y],
                        table.labels[z],
                    )
                    return report
    logger.debug("Super-Jacobi holds on %d triples of %s", report.triples_checked, table.family)
    return report
