from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Mapping

Scalar = int | Fraction


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for index in indices:
        mask |= 1 << (index - 1)
    return mask


def indices_of(mask: int) -> tuple[int, ...]:
    indices = []
    position = 1
    while mask:
        if mask & 1:
            indices.append(position)
        mask >>= 1
        position += 1
    return tuple(indices)


@lru_cache(maxsize=None)
def mask_mul(a: int, b: int) -> tuple[int, int]:
    """
    Product of two monomials given as bit sets.

    Returns (sign, mask); sign is 0 when the index sets intersect.
    """
    if a & b:
        return 0, 0
    swaps = 0
    rest = b
    position = 0
    while rest:
        if rest & 1:
            swaps += (a >> (position + 1)).bit_count()
        rest >>= 1
        position += 1
    return (-1 if swaps & 1 else 1), a | b


@lru_cache(maxsize=None)
def mask_partial(i: int, mask: int) -> tuple[int, int]:
    """
    ∂_i applied to the monomial x_mask, as (sign, mask); sign 0 means zero.
    """
    bit = 1 << (i - 1)
    if not mask & bit:
        return 0, 0
    below = (mask & (bit - 1)).bit_count()
    return (-1 if below & 1 else 1), mask ^ bit


@dataclass(frozen=True, order=True)
class Monomial:
    """
    x_{i1}⋯x_{ik} in Λ(n), stored as a bit set (bit i-1 for x_i).
    """

    mask: int
    n: int

    def __post_init__(self) -> None:
        if self.mask < 0 or self.mask >> self.n:
            raise ValueError(f"Monomial mask {self.mask:b} has indices outside 1..{self.n}")

    @classmethod
    def from_indices(cls, indices: Iterable[int], n: int) -> "Monomial":
        indices = tuple(indices)
        if len(set(indices)) != len(indices):
            raise ValueError(f"Repeated index in {indices}")
        for index in indices:
            if not 1 <= index <= n:
                raise ValueError(f"Index {index} outside 1..{n}")
        return cls(mask_of(indices), n)

    @property
    def index_set(self) -> tuple[int, ...]:
        return indices_of(self.mask)

    @property
    def degree(self) -> int:
        return self.mask.bit_count()

    @property
    def parity(self) -> int:
        return self.degree % 2

    def __str__(self) -> str:
        if not self.mask:
            return "1"
        return "".join(f"x{index}" for index in self.index_set)


def mono_mul(a: Monomial, b: Monomial) -> tuple[int, Monomial] | None:
    """
    Signed product of two monomials, None when it vanishes.
    """
    if a.n != b.n:
        raise ValueError(f"Monomials over Λ({a.n}) and Λ({b.n}) cannot be multiplied")
    sign, mask = mask_mul(a.mask, b.mask)
    if not sign:
        return None
    return sign, Monomial(mask, a.n)


class GrassmannPoly:
    """
    Finitely supported element of Λ(n): a map from monomial masks to exact
    scalars. Instances are never mutated after construction.
    """

    __slots__ = ("_terms", "n")

    def __init__(self, terms: Mapping[int, Scalar], n: int) -> None:
        self.n = n
        cleaned = {}
        for mask, value in terms.items():
            if mask >> n:
                raise ValueError(f"Monomial mask {mask:b} has indices outside 1..{n}")
            if value:
                cleaned[mask] = Fraction(value)
        self._terms = cleaned

    @classmethod
    def zero(cls, n: int) -> "GrassmannPoly":
        return cls({}, n)

    @classmethod
    def one(cls, n: int) -> "GrassmannPoly":
        return cls({0: 1}, n)

    @classmethod
    def generator(cls, i: int, n: int) -> "GrassmannPoly":
        if not 1 <= i <= n:
            raise ValueError(f"Generator x{i} outside 1..{n}")
        return cls({1 << (i - 1): 1}, n)

    @classmethod
    def monomial(cls, indices: Iterable[int], n: int, coefficient: Scalar = 1) -> "GrassmannPoly":
        """
        coefficient · x_{i1}⋯x_{ik}, sorting the indices with the matching sign.
        """
        result = cls.one(n)
        for index in indices:
            result = result * cls.generator(index, n)
        return result * coefficient

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[int, Fraction]]:
        return iter(self._terms.items())

    def coefficient(self, mask: int) -> Fraction:
        return self._terms.get(mask, Fraction(0))

    def component(self, degree: int) -> "GrassmannPoly":
        return GrassmannPoly(
            {mask: value for mask, value in self._terms.items() if mask.bit_count() == degree}, self.n
        )

    def parity_component(self, parity: int) -> "GrassmannPoly":
        return GrassmannPoly(
            {mask: value for mask, value in self._terms.items() if mask.bit_count() % 2 == parity},
            self.n,
        )

    @property
    def degrees(self) -> set[int]:
        return {mask.bit_count() for mask in self._terms}

    @property
    def parity(self) -> int | None:
        """
        Parity of a ℤ₂-homogeneous element; None for mixed elements and zero.
        """
        parities = {degree % 2 for degree in self.degrees}
        return parities.pop() if len(parities) == 1 else None

    def _check(self, other: "GrassmannPoly") -> None:
        if other.n != self.n:
            raise ValueError(f"Λ({self.n}) and Λ({other.n}) elements cannot be combined")

    def __add__(self, other: "GrassmannPoly") -> "GrassmannPoly":
        return poly_add(self, other)

    def __sub__(self, other: "GrassmannPoly") -> "GrassmannPoly":
        return poly_add(self, scalar_mul(-1, other))

    def __neg__(self) -> "GrassmannPoly":
        return scalar_mul(-1, self)

    def __mul__(self, other: "GrassmannPoly | Scalar") -> "GrassmannPoly":
        if isinstance(other, GrassmannPoly):
            return poly_mul(self, other)
        return scalar_mul(other, self)

    def __rmul__(self, other: Scalar) -> "GrassmannPoly":
        return scalar_mul(other, self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GrassmannPoly):
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
        for mask in sorted(self._terms, key=lambda m: (m.bit_count(), indices_of(m))):
            parts.append(f"{self._terms[mask]}*{Monomial(mask, self.n)}")
        return " + ".join(parts)


def poly_add(p: GrassmannPoly, q: GrassmannPoly) -> GrassmannPoly:
    p._check(q)
    terms = p.terms
    for mask, value in q.items():
        terms[mask] = terms.get(mask, 0) + value
    return GrassmannPoly(terms, p.n)


def scalar_mul(scalar: Scalar, p: GrassmannPoly) -> GrassmannPoly:
    if not scalar:
        return GrassmannPoly.zero(p.n)
    return GrassmannPoly({mask: scalar * value for mask, value in p.items()}, p.n)


def poly_mul(p: GrassmannPoly, q: GrassmannPoly) -> GrassmannPoly:
    p._check(q)
    terms: dict[int, Fraction] = {}
    for a, alpha in p.items():
        for b, beta in q.items():
            sign, mask = mask_mul(a, b)
            if sign:
                terms[mask] = terms.get(mask, 0) + sign * alpha * beta
    return GrassmannPoly(terms, p.n)


def partial(i: int, p: GrassmannPoly) -> GrassmannPoly:
    """
    The odd superderivation ∂_i of Λ(n), with ∂_i(x_j) = δ_ij.
    """
    if not 1 <= i <= p.n:
        raise ValueError(f"∂{i} is undefined on Λ({p.n})")
    terms: dict[int, Fraction] = {}
    for mask, value in p.items():
        sign, reduced = mask_partial(i, mask)
        if sign:
            terms[reduced] = terms.get(reduced, 0) + sign * value
    return GrassmannPoly(terms, p.n)


def basis(n: int, degree: int | None = None) -> list[Monomial]:
    """
    Monomials of Λ(n) (or of Λ(n)_degree), ordered by degree and then
    lexicographically by index set.
    """
    degrees = range(n + 1) if degree is None else [degree]
    monomials = []
    for k in degrees:
        for indices in combinations(range(1, n + 1), k):
            monomials.append(Monomial(mask_of(indices), n))
    return monomials
