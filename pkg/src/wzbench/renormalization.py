"""
Renormalization maps L^(1..7), the group element M and the counterterm
tables of the Wong–Zakai equation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .coproduct import TensorElement, coproduct, linear_coproduct
from .exceptions import DomainError, ValidationError
from .symbols import CATALOGUE, ONE, W0, X1, Symbol, homogeneity, name_of

N_MAPS = 7


class SymbolSpan(Mapping[Symbol, Fraction]):
    """Exact finite linear combination of symbols."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Symbol, Union[int, Fraction]]] = None):
        cleaned: Dict[Symbol, Fraction] = {}
        for tau, coeff in (terms or {}).items():
            if tau.zero:
                continue
            value = cleaned.get(tau, Fraction(0)) + Fraction(coeff)
            if value:
                cleaned[tau] = value
            else:
                cleaned.pop(tau, None)
        self._terms = cleaned

    @classmethod
    def of(cls, tau: Symbol, coeff: Union[int, Fraction] = 1) -> SymbolSpan:
        return cls({tau: coeff})

    def __getitem__(self, tau: Symbol) -> Fraction:
        return self._terms[tau]

    def __iter__(self) -> Iterator[Symbol]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def coefficient(self, tau: Symbol) -> Fraction:
        return self._terms.get(tau, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: Mapping[Symbol, Fraction]) -> SymbolSpan:
        merged: Dict[Symbol, Fraction] = dict(self._terms)
        for tau, coeff in other.items():
            merged[tau] = merged.get(tau, Fraction(0)) + coeff
        return SymbolSpan(merged)

    def __neg__(self) -> SymbolSpan:
        return SymbolSpan({tau: -c for tau, c in self._terms.items()})

    def __sub__(self, other: Mapping[Symbol, Fraction]) -> SymbolSpan:
        return self + (-SymbolSpan(other))

    def __mul__(self, factor: Union[int, Fraction]) -> SymbolSpan:
        return SymbolSpan({tau: c * factor for tau, c in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mapping):
            return NotImplemented
        return self._terms == dict(other.items())

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for tau, c in sorted(self._terms.items(), key=lambda kv: kv[0].text):
            label = name_of(tau) or tau.text
            parts.append(label if c == 1 else f"{c}·{label}")
        return " + ".join(parts)


def _span(**named: int) -> SymbolSpan:
    return SymbolSpan({CATALOGUE[name.replace("_sq", "^2")]: c for name, c in named.items()})


# Images of L^(i) on the catalogue; every other argument maps to 0.
L_TABLE: Dict[int, Dict[str, SymbolSpan]] = {
    1: {
        "Xi2": _span(One=1),
        "Xi3": _span(IXi=1),
        "Xi3b": _span(IXi=2),
        "Xi4b": _span(IXi_sq=3),
        "Xi4e": _span(IXi2=1, IXi_sq=1),
        "Xi4": _span(IXi2=1, Xi22=1),
        "Xi4c": _span(IXi_sq=1, Xi22=2),
        "Xi2X": SymbolSpan.of(X1),
        "XXi2": SymbolSpan.of(X1),
    },
    # Xi3 sits twice at the root of Xi4c, so L^(2) sees both copies.
    2: {"Xi3": _span(One=1), "Xi4": _span(IXi=1), "Xi4e": _span(IXi=1), "Xi4c": _span(IXi=2)},
    3: {"Xi3b": _span(One=1), "Xi4b": _span(IXi=3), "Xi4e": _span(IXi=1)},
    4: {"Xi4": _span(One=1)},
    5: {"Xi4e": _span(One=1)},
    6: {"Xi4b": _span(One=1)},
    7: {"Xi4c": _span(One=1)},
}

L_DOMAIN = frozenset(W0) | {X1}


def _check_index(i: int) -> None:
    if isinstance(i, bool) or not isinstance(i, int) or not 1 <= i <= N_MAPS:
        raise ValidationError(f"renormalization map index must be in 1..{N_MAPS}, got {i!r}")


def _apply_L_table(i: int, tau: Symbol) -> SymbolSpan:
    name = name_of(tau)
    if name is None:
        return SymbolSpan()
    return L_TABLE[i].get(name, SymbolSpan())


def apply_L(i: int, tau: Union[Symbol, Mapping[Symbol, Fraction]]) -> SymbolSpan:
    """L^(i)τ, extended linearly to spans."""
    _check_index(i)
    if isinstance(tau, Symbol):
        if tau not in L_DOMAIN:
            raise DomainError(f"L^({i}) is only defined on the sixteen base symbols, got {tau.text!r}")
        return _apply_L_table(i, tau)
    result = SymbolSpan()
    for sym, coeff in tau.items():
        result = result + apply_L(i, sym) * coeff
    return result


def nilpotency_failures() -> List[Tuple[int, int, Symbol]]:
    """Triples (i, j, τ) with L^(i)L^(j)τ ≠ 0."""
    failures = []
    for i in range(1, N_MAPS + 1):
        for j in range(1, N_MAPS + 1):
            for tau in W0:
                if not apply_L(i, apply_L(j, tau)).is_zero():
                    failures.append((i, j, tau))
    return failures


def monotonicity_failures() -> List[Tuple[int, Symbol, Symbol]]:
    """Triples (i, τ, σ) where σ appears in L^(i)τ without |σ| > |τ|."""
    failures = []
    for i in range(1, N_MAPS + 1):
        for tau in W0:
            for sigma in apply_L(i, tau):
                if not homogeneity(sigma) > homogeneity(tau):
                    failures.append((i, tau, sigma))
    return failures


def structure_identity_failures(maps: Sequence[int] = (2, 3, 4, 5, 6, 7)) -> List[Tuple[int, Symbol]]:
    """Pairs (j, τ) for which Δ(L^(j)τ) ≠ (L^(j) ⊗ Id)Δτ."""
    failures = []
    for j in maps:
        _check_index(j)
        for tau in W0:
            left = linear_coproduct(apply_L(j, tau))
            right: TensorElement = coproduct(tau).map_left(lambda s, j=j: _apply_L_table(j, s))
            if left != right:
                failures.append((j, tau))
    return failures


@dataclass(frozen=True)
class RenormalizationMap:
    """M = Id − Σ ℓ_i L^(i), exact because the L^(i) compose to zero."""

    ell: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.ell) != N_MAPS:
            raise ValidationError(f"expected {N_MAPS} renormalization parameters, got {len(self.ell)}")
        object.__setattr__(self, "ell", tuple(Fraction(v) for v in self.ell))

    def __call__(self, tau: Union[Symbol, Mapping[Symbol, Fraction]]) -> SymbolSpan:
        span = SymbolSpan.of(tau) if isinstance(tau, Symbol) else SymbolSpan(tau)
        result = span
        for i, value in enumerate(self.ell, start=1):
            if value:
                result = result - apply_L(i, span) * value
        return result

    def counterterm(self, tau: Symbol) -> Fraction:
        """Coefficient of One in Mτ."""
        return self(tau).coefficient(ONE)

    def counterterm_table(self) -> Dict[str, Fraction]:
        return {name_of(tau) or tau.text: self.counterterm(tau) for tau in W0}


def renorm_map(ell: Sequence[Union[int, Fraction]]) -> RenormalizationMap:
    return RenormalizationMap(tuple(Fraction(v) for v in ell))


def counterterm_coefficients() -> Dict[str, Dict[int, Fraction]]:
    """Coefficient of One in Mτ as a linear form in (ℓ_1..ℓ_7), for each nonzero entry."""
    forms: Dict[str, Dict[int, Fraction]] = {}
    for tau in W0:
        form = {i: -_apply_L_table(i, tau).coefficient(ONE) for i in range(1, N_MAPS + 1)}
        form = {i: c for i, c in form.items() if c}
        if form:
            forms[name_of(tau) or tau.text] = form
    return forms


@dataclass(frozen=True)
class RenormalizationConstants:
    """The seven constants of the renormalized equation."""

    C1: float = 0.0
    C2: float = 0.0
    C3: float = 0.0
    c1: float = 0.0
    c2: float = 0.0
    c3: float = 0.0
    c4: float = 0.0

    @classmethod
    def from_diagrams(cls, values: Mapping[str, float]) -> RenormalizationConstants:
        """Assemble from the diagram integrals (names as in the constant library)."""
        return cls(
            C1=values["Xi2"],
            C2=values["Xi3"],
            C3=values["Xi3b"],
            c1=values["Xi4b"],
            c2=values["Xi4_1"] + values["Xi4_2"] + values["Xi4_3"],
            c3=values["Xi4c"],
            c4=values["Xi4e_1"] + values["Xi4e_2"] + values["Xi4e_3"],
        )

    def ell(self, eps: float) -> Tuple[float, ...]:
        """Parameters (ℓ_1..ℓ_7) at regularization ε."""
        root = math.sqrt(eps)
        return (self.C1 / eps, self.C2 / root, self.C3 / root, self.c2, self.c4, self.c1, self.c3)

    def as_dict(self) -> Dict[str, float]:
        return {k: getattr(self, k) for k in ("C1", "C2", "C3", "c1", "c2", "c3", "c4")}


# Which constant (and ε-power) feeds each ℓ_i.
ELL_SOURCES: Dict[int, Tuple[str, Fraction]] = {
    1: ("C1", Fraction(-1)),
    2: ("C2", Fraction(-1, 2)),
    3: ("C3", Fraction(-1, 2)),
    4: ("c2", Fraction(0)),
    5: ("c4", Fraction(0)),
    6: ("c1", Fraction(0)),
    7: ("c3", Fraction(0)),
}


@dataclass(frozen=True)
class CountertermDescriptor:
    """coefficient · G^a G'^b G''^c G'''^d · (∂_x u)^e."""

    coefficient: Fraction
    g_powers: Tuple[int, int, int, int]
    du_power: int = 0

    def __str__(self) -> str:
        names = ("G(u)", "G'(u)", "G''(u)", "G'''(u)")
        parts = []
        if self.coefficient != 1:
            parts.append(str(self.coefficient))
        for name, power in zip(names, self.g_powers):
            if power:
                parts.append(name if power == 1 else f"{name}^{power}")
        if self.du_power:
            parts.append("u'" if self.du_power == 1 else f"u'^{self.du_power}")
        return " ".join(parts) if parts else "1"


def _d(coefficient: Union[int, Fraction], powers: Tuple[int, int, int, int], du: int = 0) -> CountertermDescriptor:
    return CountertermDescriptor(Fraction(coefficient), powers, du)


RHS_TABLE: Dict[str, CountertermDescriptor] = {
    "Xi": _d(1, (1, 0, 0, 0)),
    "Xi2": _d(1, (1, 1, 0, 0)),
    "Xi3": _d(1, (1, 2, 0, 0)),
    "XiX": _d(1, (0, 1, 0, 0), 1),
    "Xi3b": _d(Fraction(1, 2), (2, 0, 1, 0)),
    "Xi4b": _d(Fraction(1, 6), (3, 0, 0, 1)),
    "Xi4": _d(1, (1, 3, 0, 0)),
    "Xi4c": _d(Fraction(1, 2), (2, 1, 1, 0)),
    "Xi4e": _d(1, (2, 1, 1, 0)),
    "Xi2X": _d(1, (0, 2, 0, 0), 1),
    "XXi2": _d(1, (1, 0, 1, 0), 1),
}


def rhs_coefficient_table() -> Dict[Symbol, CountertermDescriptor]:
    return {CATALOGUE[name]: desc for name, desc in RHS_TABLE.items()}


@dataclass(frozen=True)
class EquationTerm:
    """−multiplier · constant · ε^eps_power · G-monomial in the drift."""

    constant: str
    eps_power: Fraction
    multiplier: Fraction
    g_powers: Tuple[int, int, int, int]


EQUATION_COUNTERTERMS: Tuple[EquationTerm, ...] = (
    EquationTerm("C1", Fraction(-1), Fraction(1), (1, 1, 0, 0)),
    EquationTerm("C2", Fraction(-1, 2), Fraction(1), (1, 2, 0, 0)),
    EquationTerm("C3", Fraction(-1, 2), Fraction(1), (2, 0, 1, 0)),
    EquationTerm("c1", Fraction(0), Fraction(1, 6), (3, 0, 0, 1)),
    EquationTerm("c2", Fraction(0), Fraction(1), (1, 3, 0, 0)),
    EquationTerm("c3", Fraction(0), Fraction(1, 2), (2, 1, 1, 0)),
    EquationTerm("c4", Fraction(0), Fraction(1), (2, 1, 1, 0)),
)


def equation_counterterms() -> Tuple[EquationTerm, ...]:
    return EQUATION_COUNTERTERMS


@dataclass(frozen=True)
class CountertermComparison:
    constant: str
    symbol: str
    table_multiplier: Fraction
    equation_multiplier: Fraction
    same_monomial: bool

    @property
    def agrees(self) -> bool:
        return self.same_monomial and self.table_multiplier == self.equation_multiplier


def counterterm_consistency() -> List[CountertermComparison]:
    """Compare the drift predicted by (counterterm table × RHS table) with the equation's terms."""
    equation = {term.constant: term for term in EQUATION_COUNTERTERMS}
    rows = []
    for name, form in counterterm_coefficients().items():
        descriptor = RHS_TABLE[name]
        for i, coeff in form.items():
            constant, eps_power = ELL_SOURCES[i]
            term = equation[constant]
            rows.append(
                CountertermComparison(
                    constant=constant,
                    symbol=name,
                    table_multiplier=-coeff * descriptor.coefficient,
                    equation_multiplier=term.multiplier,
                    same_monomial=descriptor.g_powers == term.g_powers and eps_power == term.eps_power,
                )
            )
    rows.sort(key=lambda row: row.constant)
    return rows
