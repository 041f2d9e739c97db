"""
Coproduct Δ: T → T ⊗ T₊ on the symbol algebra.

The right factor is a commutative monomial in the generators X^k and
J_l(τ); generators J_l(τ) only exist for |l|_s < |τ| + 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

from .exceptions import DomainError
from .homogeneity import Homogeneity
from .symbols import (
    INTEGRATION_GAIN,
    ONE,
    XI,
    ZERO_INDEX,
    MultiIndex,
    Symbol,
    factors,
    homogeneity,
    indices_below,
    integrate,
    monomial,
    product,
)

JGenerator = Tuple[MultiIndex, Symbol]


def _generator_key(gen: JGenerator) -> Tuple[int, int, str]:
    return (gen[0].k0, gen[0].k1, gen[1].text)


@dataclass(frozen=True)
class PlusMonomial:
    """X^x · Π J_l(τ), with the J generators sorted."""

    x: MultiIndex = ZERO_INDEX
    js: Tuple[JGenerator, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "js", tuple(sorted(self.js, key=_generator_key)))

    @property
    def is_unit(self) -> bool:
        return self.x.is_zero() and not self.js

    def __mul__(self, other: PlusMonomial) -> PlusMonomial:
        return PlusMonomial(self.x + other.x, self.js + other.js)

    def __str__(self) -> str:
        parts = []
        if self.x.k0:
            parts.append("X0" if self.x.k0 == 1 else f"X0^{self.x.k0}")
        if self.x.k1:
            parts.append("X1" if self.x.k1 == 1 else f"X1^{self.x.k1}")
        parts.extend(f"J{l}[{tau.text}]" for l, tau in self.js)
        return " ".join(parts) if parts else "1"


UNIT = PlusMonomial()
Key = Tuple[Symbol, PlusMonomial]


class TensorElement(Mapping[Key, Fraction]):
    """Finite rational combination of τ ⊗ m with no zero coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Key, Fraction]] = None):
        cleaned: Dict[Key, Fraction] = {}
        for (tau, mono), coeff in (terms or {}).items():
            if tau.zero:
                continue
            value = cleaned.get((tau, mono), Fraction(0)) + Fraction(coeff)
            if value:
                cleaned[(tau, mono)] = value
            else:
                cleaned.pop((tau, mono), None)
        self._terms = cleaned

    @classmethod
    def simple(cls, tau: Symbol, mono: PlusMonomial = UNIT, coeff: Fraction = Fraction(1)) -> TensorElement:
        return cls({(tau, mono): coeff})

    def __getitem__(self, key: Key) -> Fraction:
        return self._terms[key]

    def __iter__(self) -> Iterator[Key]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __add__(self, other: TensorElement) -> TensorElement:
        merged: Dict[Key, Fraction] = dict(self._terms)
        for key, coeff in other.items():
            merged[key] = merged.get(key, Fraction(0)) + coeff
        return TensorElement(merged)

    def scale(self, factor: Fraction) -> TensorElement:
        return TensorElement({key: coeff * factor for key, coeff in self.items()})

    def __mul__(self, other: TensorElement) -> TensorElement:
        merged: Dict[Key, Fraction] = {}
        for (t1, m1), c1 in self.items():
            for (t2, m2), c2 in other.items():
                tau = product(t1, t2)
                if tau.zero:
                    continue
                key = (tau, m1 * m2)
                merged[key] = merged.get(key, Fraction(0)) + c1 * c2
        return TensorElement(merged)

    def map_left(self, f: Callable[[Symbol], Mapping[Symbol, Fraction]]) -> TensorElement:
        """Apply a linear map to the left factor."""
        merged: Dict[Key, Fraction] = {}
        for (tau, mono), coeff in self.items():
            for image, c in f(tau).items():
                key = (image, mono)
                merged[key] = merged.get(key, Fraction(0)) + coeff * c
        return TensorElement(merged)

    def counit_right(self) -> Dict[Symbol, Fraction]:
        """Project the right factor onto its constant term."""
        result: Dict[Symbol, Fraction] = {}
        for (tau, mono), coeff in self.items():
            if mono.is_unit:
                result[tau] = result.get(tau, Fraction(0)) + coeff
        return {tau: c for tau, c in result.items() if c}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mapping):
            return NotImplemented
        return dict(self._terms) == dict(other.items())

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        terms = sorted(self._terms.items(), key=lambda kv: (kv[0][0].text, str(kv[0][1])))
        return " + ".join(f"{c}·({t.text} ⊗ {m})" for (t, m), c in terms)


def _integrate_left(tau: Symbol) -> Dict[Symbol, Fraction]:
    image = integrate(tau)
    return {} if image.zero else {image: Fraction(1)}


def _polynomial_coproduct(k: MultiIndex) -> TensorElement:
    terms = {}
    for lower in k.sub_indices():
        terms[(monomial(lower), PlusMonomial(x=k - lower))] = Fraction(k.binomial(lower))
    return TensorElement(terms)


@lru_cache(maxsize=None)
def coproduct(tau: Symbol) -> TensorElement:
    """Δτ for τ in the regularity structure."""
    if tau.zero:
        return TensorElement()
    if tau.is_polynomial:
        return _polynomial_coproduct(tau.poly)
    parts = factors(tau)
    if len(parts) == 1:
        only = parts[0]
        if only == XI:
            return TensorElement.simple(XI)
        (sigma,) = only.children
        return _coproduct_integral(sigma)
    result = TensorElement.simple(ONE)
    for part in parts:
        result = result * coproduct(part)
    return result


def _coproduct_integral(sigma: Symbol) -> TensorElement:
    result = coproduct(sigma).map_left(_integrate_left)
    bound = homogeneity(sigma) + INTEGRATION_GAIN
    extra: Dict[Key, Fraction] = {}
    for m in indices_below(bound):
        for lower in m.sub_indices():
            upper = m - lower
            coeff = Fraction(1, lower.factorial() * upper.factorial())
            key = (monomial(lower), PlusMonomial(x=upper, js=((m, sigma),)))
            extra[key] = extra.get(key, Fraction(0)) + coeff
    return result + TensorElement(extra)


def is_admissible_generator(l: MultiIndex, tau: Symbol) -> bool:
    return Homogeneity(l.scaled_degree) < homogeneity(tau) + INTEGRATION_GAIN


def counit_failures(taus: Iterable[Symbol]) -> List[Symbol]:
    """Symbols for which (Id ⊗ 1*)Δτ ≠ τ; empty when the counit property holds."""
    failures = []
    for tau in taus:
        if coproduct(tau).counit_right() != {tau: Fraction(1)}:
            failures.append(tau)
    return failures


def linear_coproduct(span: Mapping[Symbol, Fraction]) -> TensorElement:
    result = TensorElement()
    for tau, coeff in span.items():
        if tau.zero:
            raise DomainError("cannot take the coproduct of Zero")
        result = result + coproduct(tau).scale(coeff)
    return result
