"""
Exact homogeneities of the form c + q·κ.

κ is an arbitrarily small positive parameter, so comparisons are
lexicographic in (c, q): the rational part decides and the κ coefficient
breaks ties.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple, Union

from .exceptions import ParseError

Rational = Union[int, Fraction]
HomogeneityLike = Union["Homogeneity", int, Fraction, Tuple[Rational, Rational]]


@dataclass(frozen=True, order=True)
class Homogeneity:
    """Exact rational pair (c, q) standing for c + qκ."""

    c: Fraction = Fraction(0)
    q: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", Fraction(self.c))
        object.__setattr__(self, "q", Fraction(self.q))

    @classmethod
    def of(cls, value: HomogeneityLike) -> Homogeneity:
        if isinstance(value, Homogeneity):
            return value
        if isinstance(value, tuple):
            c, q = value
            return cls(Fraction(c), Fraction(q))
        return cls(Fraction(value), Fraction(0))

    @classmethod
    def from_list(cls, values: Sequence[int]) -> Homogeneity:
        """Decode the `[num, den, kq_num, kq_den]` wire form (two-element lists allowed)."""
        if len(values) == 2:
            num, den = values
            kq_num, kq_den = 0, 1
        elif len(values) == 4:
            num, den, kq_num, kq_den = values
        else:
            raise ParseError(f"homogeneity must have 2 or 4 integers, got {list(values)!r}")
        if den == 0 or kq_den == 0:
            raise ParseError(f"zero denominator in homogeneity {list(values)!r}")
        return cls(Fraction(num, den), Fraction(kq_num, kq_den))

    def to_list(self) -> list:
        return [self.c.numerator, self.c.denominator, self.q.numerator, self.q.denominator]

    def __add__(self, other: HomogeneityLike) -> Homogeneity:
        o = Homogeneity.of(other)
        return Homogeneity(self.c + o.c, self.q + o.q)

    __radd__ = __add__

    def __sub__(self, other: HomogeneityLike) -> Homogeneity:
        o = Homogeneity.of(other)
        return Homogeneity(self.c - o.c, self.q - o.q)

    def __rsub__(self, other: HomogeneityLike) -> Homogeneity:
        return Homogeneity.of(other) - self

    def __neg__(self) -> Homogeneity:
        return Homogeneity(-self.c, -self.q)

    def __mul__(self, k: Rational) -> Homogeneity:
        return Homogeneity(self.c * k, self.q * k)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.c == 0 and self.q == 0

    def is_negative(self) -> bool:
        return self < ZERO

    def evaluate(self, kappa: float) -> float:
        return float(self.c) + float(self.q) * kappa

    def __str__(self) -> str:
        if self.q == 0:
            return str(self.c)
        coeff = abs(self.q)
        kappa = "κ" if coeff == 1 else f"{coeff}κ"
        if self.c == 0:
            return f"-{kappa}" if self.q < 0 else kappa
        sign = "-" if self.q < 0 else "+"
        return f"{self.c} {sign} {kappa}"


ZERO = Homogeneity()


def total(values: Sequence[Homogeneity]) -> Homogeneity:
    acc = ZERO
    for v in values:
        acc = acc + v
    return acc
