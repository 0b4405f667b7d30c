import math
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Mapping, Sequence

from sympy import isprime

from src.utils.exceptions import FieldError

Number = int | Fraction

DEFAULT_PRIME = 2**31 - 1


def clear_denominators(row: Mapping[int, Number]) -> dict[int, int]:
    """
    Scale a rational row by the lcm of its denominators.

    The scaled row has the same solution space over ℚ, and its reduction
    mod p can only lose rank, never gain it.
    """
    denominators = [value.denominator for value in row.values() if isinstance(value, Fraction)]
    scale = math.lcm(*denominators) if denominators else 1
    scaled = {}
    for col, value in row.items():
        if not value:
            continue
        scaled[col] = int(value * scale)
    return scaled


class Field(ABC):
    """
    Arithmetic contract shared by the exact rational backend and the
    prime-field backend. Solver code only talks to this interface.
    """

    tag: str = ""
    modulus: int | None = None

    @abstractmethod
    def element(self, value: Number) -> Number:
        pass

    @abstractmethod
    def prepare_row(self, row: Mapping[int, Number]) -> dict[int, int]:
        """
        Turn an assembled row into the eliminator's internal integer form.
        """
        pass

    @abstractmethod
    def eliminator(self, ncols: int, column_order: Sequence[int] | None = None):
        pass

    def zero(self) -> Number:
        return self.element(0)

    def one(self) -> Number:
        return self.element(1)

    def is_zero(self, value: Number) -> bool:
        return self.element(value) == 0

    def add(self, a: Number, b: Number) -> Number:
        return self.element(a + b)

    def sub(self, a: Number, b: Number) -> Number:
        return self.element(a - b)

    def mul(self, a: Number, b: Number) -> Number:
        return self.element(a * b)

    def neg(self, a: Number) -> Number:
        return self.element(-a)

    @abstractmethod
    def inv(self, a: Number) -> Number:
        pass

    def convert_vector(self, vector: Mapping[int, Number]) -> dict[int, Number]:
        converted = {}
        for col, value in vector.items():
            element = self.element(value)
            if element:
                converted[col] = element
        return converted


class RationalField(Field):
    """
    The field ℚ with arbitrary-precision Fractions.
    """

    tag = "exact"
    modulus = None

    def element(self, value: Number) -> Fraction:
        return Fraction(value)

    def prepare_row(self, row: Mapping[int, Number]) -> dict[int, int]:
        scaled = clear_denominators(row)
        if not scaled:
            return scaled
        content = math.gcd(*scaled.values())
        if content > 1:
            scaled = {col: value // content for col, value in scaled.items()}
        return scaled

    def inv(self, a: Number) -> Fraction:
        if a == 0:
            raise FieldError("Zero has no inverse in QQ")
        return 1 / Fraction(a)

    def eliminator(self, ncols: int, column_order: Sequence[int] | None = None):
        from src.linalg.sparse import RationalEliminator

        return RationalEliminator(ncols, self, column_order)

    def __repr__(self) -> str:
        return "QQ"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("QQ")


class PrimeField(Field):
    """
    The prime field F_p, elements stored as ints in [0, p).
    """

    tag = "modp"

    def __init__(self, p: int = DEFAULT_PRIME) -> None:
        if p < 2 or not isprime(p):
            raise FieldError(f"Modulus {p} is not prime")
        self.modulus = p

    def element(self, value: Number) -> int:
        p = self.modulus
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise FieldError(f"Denominator of {value} vanishes mod {p}")
            return value.numerator * pow(value.denominator, -1, p) % p
        return value % p

    def prepare_row(self, row: Mapping[int, Number]) -> dict[int, int]:
        p = self.modulus
        reduced = {}
        for col, value in clear_denominators(row).items():
            value %= p
            if value:
                reduced[col] = value
        return reduced

    def inv(self, a: Number) -> int:
        a = self.element(a)
        if a == 0:
            raise FieldError(f"Zero has no inverse mod {self.modulus}")
        return pow(a, -1, self.modulus)

    def eliminator(self, ncols: int, column_order: Sequence[int] | None = None):
        from src.linalg.sparse import ModularEliminator

        return ModularEliminator(ncols, self, column_order)

    def __repr__(self) -> str:
        return f"GF({self.modulus})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.modulus == self.modulus

    def __hash__(self) -> int:
        return hash(("GF", self.modulus))


def make_field(mode: str, prime: int = DEFAULT_PRIME) -> Field:
    """
    Build the field named by a CLI mode string ("exact" or "modp").
    """
    if mode == "exact":
        return RationalField()
    if mode == "modp":
        return PrimeField(prime)
    raise FieldError(f"Unknown field mode: {mode}")
