"""
Symbolic algebra of the Wong–Zakai regularity structure.

Symbols are kept in a canonical product form: a polynomial factor X^k, at
most one noise factor Ξ and a sorted multiset of I(·) children. Everything
here is exact rational arithmetic.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple

from .exceptions import DomainError, ParseError, UndefinedHomogeneityError, ValidationError
from .homogeneity import ZERO as ZERO_HOMOGENEITY
from .homogeneity import Homogeneity, HomogeneityLike

logger = logging.getLogger(__name__)

XI_HOMOGENEITY = Homogeneity(Fraction(-3, 2), Fraction(-1))
INTEGRATION_GAIN = Homogeneity(Fraction(2))
DEFAULT_CUTOFF = Homogeneity(Fraction(5, 2))


@dataclass(frozen=True, order=True)
class MultiIndex:
    """Space-time multi-index (k0 for time, k1 for space)."""

    k0: int = 0
    k1: int = 0

    def __post_init__(self) -> None:
        if self.k0 < 0 or self.k1 < 0:
            raise ValidationError(f"multi-index entries must be natural numbers, got {self}")

    @property
    def scaled_degree(self) -> int:
        return 2 * self.k0 + self.k1

    def __add__(self, other: MultiIndex) -> MultiIndex:
        return MultiIndex(self.k0 + other.k0, self.k1 + other.k1)

    def __sub__(self, other: MultiIndex) -> MultiIndex:
        return MultiIndex(self.k0 - other.k0, self.k1 - other.k1)

    def is_zero(self) -> bool:
        return self.k0 == 0 and self.k1 == 0

    def factorial(self) -> int:
        return math.factorial(self.k0) * math.factorial(self.k1)

    def binomial(self, lower: MultiIndex) -> int:
        return math.comb(self.k0, lower.k0) * math.comb(self.k1, lower.k1)

    def sub_indices(self) -> Iterator[MultiIndex]:
        for a in range(self.k0 + 1):
            for b in range(self.k1 + 1):
                yield MultiIndex(a, b)

    def __str__(self) -> str:
        return f"({self.k0},{self.k1})"


ZERO_INDEX = MultiIndex()


def indices_below(degree: HomogeneityLike) -> List[MultiIndex]:
    """All multi-indices with |k|_s strictly below the given homogeneity."""
    bound = Homogeneity.of(degree)
    found = []
    k0 = 0
    while Homogeneity(2 * k0) < bound:
        k1 = 0
        while Homogeneity(2 * k0 + k1) < bound:
            found.append(MultiIndex(k0, k1))
            k1 += 1
        k0 += 1
    return found


def _format_power(name: str, exponent: int) -> str:
    return name if exponent == 1 else f"{name}^{exponent}"


@dataclass(frozen=True)
class Symbol:
    """Canonical product node X^k · Ξ^{0|1} · Π I(τ_j)."""

    poly: MultiIndex = field(default=ZERO_INDEX)
    xi: bool = False
    children: Tuple["Symbol", ...] = ()
    zero: bool = False

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.children, key=lambda c: c.text))
        object.__setattr__(self, "children", ordered)

    @cached_property
    def text(self) -> str:
        if self.zero:
            return "0"
        parts = []
        if self.poly.k0:
            parts.append(_format_power("X0", self.poly.k0))
        if self.poly.k1:
            parts.append(_format_power("X1", self.poly.k1))
        if self.xi:
            parts.append("Xi")
        parts.extend(f"I({child.text})" for child in self.children)
        return " ".join(parts) if parts else "1"

    @property
    def is_polynomial(self) -> bool:
        return not self.zero and not self.xi and not self.children

    @property
    def is_unit(self) -> bool:
        return self.is_polynomial and self.poly.is_zero()

    def __mul__(self, other: Symbol) -> Symbol:
        return product(self, other)

    def __str__(self) -> str:
        return self.text

    def __repr__(self) -> str:
        return f"Symbol({self.text!r})"


ONE = Symbol()
ZERO = Symbol(zero=True)
XI = Symbol(xi=True)
X0 = Symbol(poly=MultiIndex(1, 0))
X1 = Symbol(poly=MultiIndex(0, 1))


def monomial(k: MultiIndex) -> Symbol:
    return Symbol(poly=k)


def product(*factors: Symbol) -> Symbol:
    """Multiply symbols; Zero is absorbing and Ξ·Ξ is outside the structure."""
    if any(f.zero for f in factors):
        return ZERO
    poly = ZERO_INDEX
    xi_count = 0
    children: List[Symbol] = []
    for f in factors:
        poly = poly + f.poly
        xi_count += int(f.xi)
        children.extend(f.children)
    if xi_count > 1:
        raise DomainError("product contains more than one Xi factor")
    return Symbol(poly=poly, xi=xi_count == 1, children=tuple(children))


def integrate(tau: Symbol) -> Symbol:
    """Abstract integration I(τ); vanishes on Zero and on polynomials."""
    if tau.zero or tau.is_polynomial:
        return ZERO
    return Symbol(children=(tau,))


def factors(tau: Symbol) -> List[Symbol]:
    """Split a symbol into its multiplicative generators."""
    parts: List[Symbol] = []
    if not tau.poly.is_zero():
        parts.append(monomial(tau.poly))
    if tau.xi:
        parts.append(XI)
    parts.extend(integrate(child) for child in tau.children)
    return parts


@lru_cache(maxsize=None)
def homogeneity(tau: Symbol) -> Homogeneity:
    if tau.zero:
        raise UndefinedHomogeneityError("the Zero symbol has no homogeneity")
    value = Homogeneity(tau.poly.scaled_degree)
    if tau.xi:
        value = value + XI_HOMOGENEITY
    for child in tau.children:
        value = value + homogeneity(child) + INTEGRATION_GAIN
    return value


class _SymbolParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> ParseError:
        return ParseError(f"{message} at position {self.pos} in {self.text!r}")

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Symbol:
        result = self.parse_product()
        self.skip()
        if self.pos != len(self.text):
            raise self.error(f"unexpected {self.peek()!r}")
        return result

    def parse_product(self) -> Symbol:
        collected: List[Symbol] = []
        while True:
            self.skip()
            if self.peek() in ("", ")"):
                break
            start = self.pos
            base = self.parse_atom()
            power = self.parse_power()
            if base.xi and power > 1:
                self.pos = start
                raise self.error("Xi may appear at most once in a product")
            collected.extend([base] * power)
        if not collected:
            raise self.error("empty product")
        try:
            return product(*collected)
        except DomainError as exc:
            raise self.error(str(exc)) from exc

    def parse_power(self) -> int:
        if self.peek() != "^":
            return 1
        self.pos += 1
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected exponent")
        return int(self.text[start : self.pos])

    def parse_atom(self) -> Symbol:
        rest = self.text[self.pos :]
        if rest.startswith("Xi"):
            self.pos += 2
            return XI
        if rest.startswith("X0"):
            self.pos += 2
            return X0
        if rest.startswith("X1"):
            self.pos += 2
            return X1
        if rest.startswith("I("):
            self.pos += 2
            inner = self.parse_product()
            self.skip()
            if self.peek() != ")":
                raise self.error("expected ')'")
            self.pos += 1
            return integrate(inner)
        if rest.startswith("1"):
            self.pos += 1
            return ONE
        if rest.startswith("0"):
            self.pos += 1
            return ZERO
        raise self.error(f"unexpected {self.peek()!r}")


def parse_symbol(text: str) -> Symbol:
    """Parse the compact grammar, e.g. ``Xi I(Xi)`` or ``X1 Xi I(Xi)^2``."""
    return _SymbolParser(text).parse()


def format_symbol(tau: Symbol) -> str:
    return tau.text


CATALOGUE_TEXT: Dict[str, str] = {
    "Xi": "Xi",
    "Xi2": "Xi I(Xi)",
    "XiX": "X1 Xi",
    "Xi3": "Xi I(Xi I(Xi))",
    "Xi3b": "Xi I(Xi)^2",
    "Xi4": "Xi I(Xi I(Xi I(Xi)))",
    "Xi4b": "Xi I(Xi)^3",
    "Xi4c": "Xi I(Xi I(Xi)^2)",
    "Xi4e": "Xi I(Xi) I(Xi I(Xi))",
    "Xi2X": "Xi I(X1 Xi)",
    "XXi2": "X1 Xi I(Xi)",
    "IXi": "I(Xi)",
    "IXi^2": "I(Xi)^2",
    "IXi2": "I(Xi I(Xi))",
    "Xi22": "Xi I(I(Xi))",
    "One": "1",
}

CATALOGUE: Dict[str, Symbol] = {name: parse_symbol(text) for name, text in CATALOGUE_TEXT.items()}
NAMES: Dict[Symbol, str] = {sym: name for name, sym in CATALOGUE.items()}

# The sixteen symbols on which the renormalization maps act.
W0: Tuple[Symbol, ...] = tuple(CATALOGUE.values())

NEGATIVE_NAMES = ("Xi", "Xi2", "XiX", "Xi3", "Xi3b", "Xi4", "Xi4b", "Xi4c", "Xi4e", "Xi2X", "XXi2")


def symbol(name_or_text: str) -> Symbol:
    """Look up a catalogue name, falling back to the text grammar."""
    if name_or_text in CATALOGUE:
        return CATALOGUE[name_or_text]
    return parse_symbol(name_or_text)


def name_of(tau: Symbol) -> Optional[str]:
    return NAMES.get(tau)


def sort_key(tau: Symbol) -> Tuple[Homogeneity, str]:
    return (homogeneity(tau), tau.text)


def _monomials(generators: List[Symbol], bound: Homogeneity) -> FrozenSet[Symbol]:
    degrees = [homogeneity(g) for g in generators]
    found = {ONE}

    def extend(start: int, current: Symbol, degree: Homogeneity) -> None:
        for i in range(start, len(generators)):
            nxt = degree + degrees[i]
            if nxt > bound:
                break
            sym = product(current, generators[i])
            found.add(sym)
            extend(i, sym, nxt)

    extend(0, ONE, ZERO_HOMOGENEITY)
    return frozenset(found)


def generate_W(cutoff: HomogeneityLike = DEFAULT_CUTOFF) -> FrozenSet[Symbol]:
    """Generate all symbols of homogeneity at most ``cutoff``."""
    cutoff = Homogeneity.of(cutoff)
    if cutoff < ZERO_HOMOGENEITY:
        raise ValidationError(f"cutoff must be non-negative, got {cutoff}")
    bound = cutoff - XI_HOMOGENEITY
    current: FrozenSet[Symbol] = frozenset({ONE})
    rounds = 0
    while True:
        rounds += 1
        generators = {X0, X1}
        for tau in current:
            for candidate in (integrate(tau), integrate(product(XI, tau))):
                if not candidate.zero and homogeneity(candidate) <= bound:
                    generators.add(candidate)
        ordered = sorted(generators, key=sort_key)
        closure = _monomials(ordered, bound)
        if closure == current:
            break
        current = closure
    logger.debug("symbol closure stabilised after %d rounds with %d elements", rounds, len(current))
    result = {tau for tau in current if homogeneity(tau) <= cutoff}
    for tau in current:
        with_noise = product(XI, tau)
        if homogeneity(with_noise) <= cutoff:
            result.add(with_noise)
    return frozenset(result)


def homogeneity_table(symbols: Optional[List[Symbol]] = None) -> List[Tuple[str, Symbol, Homogeneity]]:
    """Rows (name, symbol, homogeneity) sorted by homogeneity."""
    chosen = symbols if symbols is not None else list(W0)
    rows = [(name_of(s) or s.text, s, homogeneity(s)) for s in chosen]
    rows.sort(key=lambda row: (row[2], row[1].text))
    return rows
