# app/exact.py
"""
Exact arithmetic substrate

Every coefficient in this package is computed without floating point:
- BigRational is the standard Fraction (always stored reduced, positive denominator)
- HalfInt keeps a spin quantum number as its doubled integer value
- SignedSqrtRational holds sign * sqrt(radicand), the natural codomain of
  3-j symbols and Clebsch-Gordan coefficients
- SurdSum adds SignedSqrtRationals exactly by grouping square-free kernels

Square roots are only evaluated in ssr_to_float / SurdSum.to_float.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Dict, Iterable, Tuple, Union

from sympy import factorint

from app.config import get_settings
from app.errors import ConfigError, DomainError, ParseError

BigRational = Fraction

RationalLike = Union[int, Fraction]


# =============================================================================
# Combinatorial primitives
# =============================================================================

def factorial(n: int) -> int:
    """n! for n >= 0"""
    if n < 0:
        raise DomainError(f"factorial of negative number {n}")
    return math.factorial(n)


def binomial(n: int, k: int) -> int:
    """C(n, k); zero outside 0 <= k <= n"""
    if n < 0:
        raise DomainError(f"binomial with negative n={n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def pochhammer(x: RationalLike, k: int) -> Fraction:
    """Rising factorial x (x+1) ... (x+k-1), always as a product.

    Negative-integer bases give exact zeros, e.g. (-3)_5 = 0.
    """
    if k < 0:
        raise DomainError(f"pochhammer order must be >= 0, got {k}")
    x = Fraction(x)
    result = Fraction(1)
    for i in range(k):
        result *= x + i
        if result == 0:
            break
    return result


# =============================================================================
# Half-integers
# =============================================================================

@dataclass(frozen=True, order=True)
class HalfInt:
    """Spin quantum number j or m stored as 2j / 2m"""
    twice_value: int

    def __post_init__(self):
        if isinstance(self.twice_value, bool) or not isinstance(self.twice_value, int):
            raise DomainError(f"twice_value must be an integer, got {self.twice_value!r}")

    @classmethod
    def of(cls, value: Union["HalfInt", int, float, str, Fraction]) -> "HalfInt":
        """Coerce ints, floats, Fractions and strings ("5/2", "2.5", "3")"""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, str):
            return parse_half_int(value)
        if isinstance(value, bool):
            raise DomainError(f"not a half-integer: {value!r}")
        if isinstance(value, (int, Rational, float)):
            doubled = 2 * Fraction(value)
            if doubled.denominator != 1:
                raise DomainError(f"not a half-integer: {value!r}")
            return cls(int(doubled))
        raise DomainError(f"not a half-integer: {value!r}")

    @property
    def is_integer(self) -> bool:
        return self.twice_value % 2 == 0

    def as_fraction(self) -> Fraction:
        return Fraction(self.twice_value, 2)

    def as_int(self) -> int:
        if not self.is_integer:
            raise DomainError(f"{self} is not an integer")
        return self.twice_value // 2

    def __add__(self, other: "HalfInt") -> "HalfInt":
        return HalfInt(self.twice_value + HalfInt.of(other).twice_value)

    def __sub__(self, other: "HalfInt") -> "HalfInt":
        return HalfInt(self.twice_value - HalfInt.of(other).twice_value)

    def __neg__(self) -> "HalfInt":
        return HalfInt(-self.twice_value)

    def __abs__(self) -> "HalfInt":
        return HalfInt(abs(self.twice_value))

    def __float__(self) -> float:
        return self.twice_value / 2

    def __str__(self) -> str:
        if self.is_integer:
            return str(self.twice_value // 2)
        return f"{self.twice_value}/2"


def parse_half_int(text: str) -> HalfInt:
    """Parse "5/2", "-1/2", "2.5" or "3" into a HalfInt"""
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError, AttributeError):
        raise ParseError(f"cannot parse {text!r} as a half-integer")
    doubled = 2 * value
    if doubled.denominator != 1:
        raise ParseError(f"{text!r} is not an integer or half-integer")
    return HalfInt(int(doubled))


def parse_spins(texts: Iterable[str]) -> Tuple[HalfInt, ...]:
    """Parse request/CLI quantum numbers and enforce CGENTROPY_MAX_TWICE_SPIN"""
    limit = get_settings().max_twice_spin
    values = tuple(parse_half_int(text) for text in texts)
    for value in values:
        if abs(value.twice_value) > limit:
            raise ConfigError(f"|2j|={abs(value.twice_value)} exceeds the limit {limit}")
    return values


def check_spin(j: HalfInt, name: str = "j") -> None:
    if j.twice_value < 0:
        raise DomainError(f"spin magnitude {name}={j} must be >= 0")


def check_pair(j: HalfInt, m: HalfInt, name: str = "j") -> None:
    """|m| <= j and j - m integer"""
    check_spin(j, name)
    if abs(m.twice_value) > j.twice_value:
        raise DomainError(f"|m|={abs(m)} exceeds {name}={j}")
    if (j.twice_value - m.twice_value) % 2 != 0:
        raise DomainError(f"parity mismatch between {name}={j} and m={m}")


def projections(j: HalfInt) -> Tuple[HalfInt, ...]:
    """m = j, j-1, ..., -j (descending)"""
    return tuple(HalfInt(t) for t in range(j.twice_value, -j.twice_value - 1, -2))


# =============================================================================
# Signed square roots of rationals
# =============================================================================

def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class SignedSqrtRational:
    """sign * sqrt(radicand); equal iff sign and radicand are equal"""
    sign: int
    radicand: Fraction

    def __post_init__(self):
        object.__setattr__(self, "radicand", Fraction(self.radicand))
        if self.sign not in (-1, 0, 1):
            raise DomainError(f"sign must be -1, 0 or +1, got {self.sign}")
        if self.radicand < 0:
            raise DomainError(f"radicand must be >= 0, got {self.radicand}")
        if (self.sign == 0) != (self.radicand == 0):
            raise DomainError("sign is zero exactly when the radicand is zero")

    @classmethod
    def zero(cls) -> "SignedSqrtRational":
        return cls(0, Fraction(0))

    @classmethod
    def one(cls) -> "SignedSqrtRational":
        return cls(1, Fraction(1))

    @classmethod
    def from_rational(cls, value: RationalLike) -> "SignedSqrtRational":
        value = Fraction(value)
        return cls(_sign(value), value * value)

    @classmethod
    def signed(cls, sign: int, radicand: RationalLike) -> "SignedSqrtRational":
        """Build from a sign and a radicand, collapsing either zero to the zero value"""
        radicand = Fraction(radicand)
        if sign == 0 or radicand == 0:
            return cls.zero()
        return cls(1 if sign > 0 else -1, radicand)

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def square(self) -> Fraction:
        return self.radicand

    def __neg__(self) -> "SignedSqrtRational":
        return SignedSqrtRational(-self.sign, self.radicand)

    def __mul__(self, other: Union["SignedSqrtRational", int, Fraction]) -> "SignedSqrtRational":
        if not isinstance(other, SignedSqrtRational):
            other = SignedSqrtRational.from_rational(other)
        return SignedSqrtRational.signed(self.sign * other.sign, self.radicand * other.radicand)

    __rmul__ = __mul__

    def __float__(self) -> float:
        return ssr_to_float(self)

    def to_string(self) -> str:
        if self.sign == 0:
            return "0"
        prefix = "-" if self.sign < 0 else ""
        return f"{prefix}sqrt({fraction_str(self.radicand)})"

    def __str__(self) -> str:
        return self.to_string()


def ssr_to_float(v: SignedSqrtRational) -> float:
    """sign * sqrt(p/q) with p and q converted separately after reduction"""
    if v.sign == 0:
        return 0.0
    return v.sign * math.sqrt(float(v.radicand.numerator) / float(v.radicand.denominator))


def fraction_str(value: RationalLike) -> str:
    """Reduced "p/q" form; integers keep a "/1" denominator off"""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


# =============================================================================
# Exact sums of signed square roots
# =============================================================================

@lru_cache(maxsize=4096)
def square_free_split(n: int) -> Tuple[int, int]:
    """n = a**2 * s with s square-free; returns (a, s)"""
    if n <= 0:
        raise DomainError(f"square-free split needs n > 0, got {n}")
    a, s = 1, 1
    for prime, power in factorint(n).items():
        a *= prime ** (power // 2)
        if power % 2:
            s *= prime
    return a, s


class SurdSum:
    """Exact sum of terms c * sqrt(s), one rational c per square-free kernel s.

    Square roots of distinct square-free integers are linearly independent
    over the rationals, so the sum is zero iff every coefficient is zero.
    """

    def __init__(self, terms: Iterable[SignedSqrtRational] = ()):
        self.coefficients: Dict[int, Fraction] = {}
        for term in terms:
            self.add(term)

    def add(self, term: Union[SignedSqrtRational, int, Fraction]) -> "SurdSum":
        if not isinstance(term, SignedSqrtRational):
            term = SignedSqrtRational.from_rational(term)
        if term.is_zero:
            return self
        # sqrt(p/q) = sqrt(p*q) / q
        p, q = term.radicand.numerator, term.radicand.denominator
        a, kernel = square_free_split(p * q)
        coefficient = self.coefficients.get(kernel, Fraction(0)) + term.sign * Fraction(a, q)
        if coefficient == 0:
            self.coefficients.pop(kernel, None)
        else:
            self.coefficients[kernel] = coefficient
        return self

    def __sub__(self, other: Union[SignedSqrtRational, int, Fraction]) -> "SurdSum":
        result = SurdSum()
        result.coefficients = dict(self.coefficients)
        if not isinstance(other, SignedSqrtRational):
            other = SignedSqrtRational.from_rational(other)
        return result.add(-other)

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    def norm_sq(self) -> Fraction:
        """sum of c**2 * s; zero iff the sum is zero, equals value**2 for one kernel"""
        return sum((c * c * s for s, c in self.coefficients.items()), Fraction(0))

    def to_float(self) -> float:
        return sum(float(c) * math.sqrt(s) for s, c in sorted(self.coefficients.items()))

    def __repr__(self) -> str:
        if not self.coefficients:
            return "SurdSum(0)"
        parts = [f"{fraction_str(c)}*sqrt({s})" for s, c in sorted(self.coefficients.items())]
        return f"SurdSum({' + '.join(parts)})"
