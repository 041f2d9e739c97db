"""
Exact power-counting checks over vertex subsets.

Subsets are enumerated exhaustively as bitmasks in numpy chunks. Labels are
scaled to integers by a common denominator so that every inequality is
decided exactly, with the κ-coefficient breaking ties.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..exceptions import ResourceLimitError, ValidationError
from ..homogeneity import Homogeneity
from .hypergraph import ROOT, Edge2, ElementaryGraph, LabeledHypergraph

logger = logging.getLogger(__name__)

MAX_VERTICES = 30
CHUNK_BITS = 20
DEFAULT_VIOLATION_LIMIT = 1000


class Mode(str, Enum):
    BIG = "big"
    ELEMENTARY = "elementary"


@dataclass(frozen=True)
class Violation:
    item: int
    subset: Tuple[str, ...]
    lhs: Homogeneity
    rhs: Homogeneity
    relation: str

    def to_dict(self) -> Dict[str, object]:
        return {
            "item": self.item,
            "subset": list(self.subset),
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "lhs_exact": self.lhs.to_list(),
            "rhs_exact": self.rhs.to_list(),
            "required": f"lhs {self.relation} rhs",
        }


@dataclass
class CheckReport:
    mode: str
    passed: bool
    violations: List[Violation] = field(default_factory=list)
    total_violations: int = 0
    subsets_checked: int = 0
    name: str = ""

    @property
    def failed_items(self) -> List[int]:
        return sorted({v.item for v in self.violations})

    def to_dict(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "mode": self.mode,
            "pass": self.passed,
            "total_violations": self.total_violations,
            "subsets_checked": self.subsets_checked,
            "violations": [v.to_dict() for v in self.violations],
        }

    def to_table(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        lines = [f"{self.name or 'graph'} [{self.mode}] {status}: "
                 f"{self.total_violations} violation(s) over {self.subsets_checked} subsets"]
        if self.violations:
            lines.append(f"{'item':<5} {'lhs':>14} {'req':^4} {'rhs':>14}  subset")
            for v in self.violations:
                lines.append(
                    f"{v.item:<5} {str(v.lhs):>14} {v.relation:^4} {str(v.rhs):>14}  "
                    + "{" + ", ".join(v.subset) + "}"
                )
        return "\n".join(lines)


@dataclass
class _Compiled:
    order: List[str]
    scale: int
    s_scaled: int
    tails: np.ndarray
    heads: np.ndarray
    a2c: np.ndarray
    a2q: np.ndarray
    r2: np.ndarray
    hmasks: np.ndarray
    ahc: np.ndarray
    ahq: np.ndarray
    in_idx: List[int]
    ex_idx: List[int]
    n_star: int

    def decode(self, mask: int) -> Tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.order) if (mask >> i) & 1)

    def value(self, c: int, q: int) -> Homogeneity:
        return Homogeneity(Fraction(int(c), self.scale), Fraction(int(q), self.scale))


def _compile(graph: LabeledHypergraph, external: Iterable[str]) -> _Compiled:
    rest = [v for v in graph.vertices if v != ROOT]
    star = sorted(v for v in rest if v in graph.vstar)
    free = sorted(v for v in rest if v not in graph.vstar)
    order = [ROOT, *star, *free]
    index = {v: i for i, v in enumerate(order)}
    labels = [e.label.a for e in graph.all_edges()]
    scale = 2
    for a in labels:
        scale = math.lcm(scale, a.c.denominator, a.q.denominator)
    ext = set(external)

    def scaled(x: Fraction) -> int:
        return int(x * scale)

    e2 = graph.edges2
    hyper = graph.edges_h
    return _Compiled(
        order=order,
        scale=scale,
        s_scaled=graph.s * scale,
        tails=np.array([index[e.tail] for e in e2], dtype=np.int64),
        heads=np.array([index[e.head] for e in e2], dtype=np.int64),
        a2c=np.array([scaled(e.label.a.c) for e in e2], dtype=np.int64),
        a2q=np.array([scaled(e.label.a.q) for e in e2], dtype=np.int64),
        r2=np.array([e.label.r * scale for e in e2], dtype=np.int64),
        hmasks=np.array([sum(1 << index[v] for v in h.members) for h in hyper], dtype=np.int64),
        ahc=np.array([scaled(h.label.a.c) for h in hyper], dtype=np.int64),
        ahq=np.array([scaled(h.label.a.q) for h in hyper], dtype=np.int64),
        in_idx=[i for i, v in enumerate(order) if v != ROOT and v not in ext],
        ex_idx=[i for i, v in enumerate(order) if v in ext],
        n_star=1 + len(star),
    )


@dataclass
class _ChunkResult:
    checked: int
    count: int
    masks: List[int]
    lhs: List[Tuple[int, int]]
    rhs: List[Tuple[int, int]]


def _bits(masks: np.ndarray, idx: Sequence[int]) -> np.ndarray:
    total = np.zeros(masks.shape, dtype=np.int64)
    for i in idx:
        total += (masks >> i) & 1
    return total


def _evaluate(cg: _Compiled, item: int, elementary: bool, masks: np.ndarray, limit: int,
              excluded: Optional[np.ndarray]) -> _ChunkResult:
    n = len(cg.order)
    all_idx = list(range(n))
    count = _bits(masks, all_idx)
    keep = np.ones(masks.shape, dtype=bool)
    if item == 2:
        keep &= count >= 3
        if excluded is not None and excluded.size:
            keep &= ~np.isin(masks, excluded)
    elif item == 3:
        keep &= count >= 2
    masks = masks[keep]
    count = count[keep]
    lc = np.zeros(masks.shape, dtype=np.int64)
    lq = np.zeros(masks.shape, dtype=np.int64)
    s = cg.s_scaled
    half = s // 2 if s % 2 == 0 else None
    for k in range(len(cg.tails)):
        bt = ((masks >> cg.tails[k]) & 1).astype(bool)
        bh = ((masks >> cg.heads[k]) & 1).astype(bool)
        ac, aq, r = cg.a2c[k], cg.a2q[k], cg.r2[k]
        if item == 2:
            both = bt & bh
            lc += ac * both
            lq += aq * both
        elif item == 3:
            both = bt & bh
            lc += ac * both
            lq += aq * both
            if r > 0:
                up = bt & ~bh
                down = bh & ~bt
                lc += (ac + r - cg.scale) * up - r * down
                lq += aq * up
        else:
            meets = bt | bh
            if r > 0:
                up = bt & ~bh
                down = bh & ~bt
                counted = meets & ~down
                lc += ac * counted + r * up - (r - cg.scale) * down
                lq += aq * counted
            else:
                lc += ac * meets
                lq += aq * meets
    for k in range(len(cg.hmasks)):
        hm = cg.hmasks[k]
        if item == 4:
            hit = (masks & hm) != 0
        else:
            hit = (masks & hm) == hm
        lc += cg.ahc[k] * hit
        lq += cg.ahq[k] * hit
    if elementary:
        n_in = _bits(masks, cg.in_idx)
        n_ex = _bits(masks, cg.ex_idx)
        if item == 2:
            doubled = 2 * n_in + n_ex - 1 - (n_ex == 0)
        else:
            doubled = 2 * n_in + n_ex
        assert half is not None
        rc = half * doubled
    elif item == 4:
        rc = s * count
    else:
        rc = s * (count - 1)
    if item == 4:
        ok = (lc > rc) | ((lc == rc) & (lq > 0))
    else:
        ok = (lc < rc) | ((lc == rc) & (lq < 0))
    bad = np.nonzero(~ok)[0]
    head = bad[:limit]
    return _ChunkResult(
        checked=int(masks.size),
        count=int(bad.size),
        masks=[int(m) for m in masks[head]],
        lhs=[(int(lc[i]), int(lq[i])) for i in head],
        rhs=[(int(rc[i]), 0) for i in head],
    )


def _item_ranges(cg: _Compiled, item: int) -> Tuple[int, int, int]:
    """(low bit, base mask, number of free bits)."""
    n = len(cg.order)
    if item == 4:
        return cg.n_star, 0, n - cg.n_star
    return 1, 1 if item == 3 else 0, n - 1


def _item1(graph: LabeledHypergraph) -> List[Violation]:
    found = []
    for e in graph.edges2:
        lhs = e.label.a - e.label.r_minus
        if not lhs < graph.s_norm:
            found.append(Violation(1, (e.tail, e.head), lhs, graph.s_norm, "<"))
    return found


def check_assumption(
    graph: Union[LabeledHypergraph, ElementaryGraph],
    mode: Union[Mode, str] = Mode.BIG,
    *,
    jobs: int = 1,
    violation_limit: int = DEFAULT_VIOLATION_LIMIT,
    excluded_subsets: Optional[Iterable[Iterable[str]]] = None,
    normalize_bad_chains: bool = False,
    items: Sequence[int] = (1, 2, 3, 4),
) -> CheckReport:
    """Evaluate the four power-counting items over all required vertex subsets.

    Subsets are enumerated exhaustively, so the cost grows like 2^|V|; graphs
    with more than MAX_VERTICES vertices raise ResourceLimitError. Disconnected
    subsets are not pruned: two 2-vertex pieces can break item 2 together while
    every connected subset passes.
    """
    mode = Mode(mode)
    if mode is Mode.ELEMENTARY and not isinstance(graph, ElementaryGraph):
        raise ValidationError("elementary mode requires an ElementaryGraph")
    if normalize_bad_chains:
        from .contraction import normalize_bad_chains as _normalize

        graph = _normalize(graph)
    if isinstance(graph, ElementaryGraph):
        if mode is Mode.ELEMENTARY:
            graph.validate()
        else:
            graph.graph.validate()
        name = graph.name
        hg = graph.graph
        external: Iterable[str] = graph.external if mode is Mode.ELEMENTARY else ()
    else:
        graph.validate()
        name = ""
        hg = graph
        external = ()
    if len(hg.vertices) > MAX_VERTICES:
        raise ResourceLimitError(
            f"graph has {len(hg.vertices)} vertices; exhaustive enumeration is capped at {MAX_VERTICES}"
        )
    cg = _compile(hg, external)
    elementary = mode is Mode.ELEMENTARY
    excluded = None
    if excluded_subsets is not None:
        index = {v: i for i, v in enumerate(cg.order)}
        excluded = np.array(
            sorted({sum(1 << index[v] for v in subset) for subset in excluded_subsets}), dtype=np.int64
        )

    violations: List[Violation] = []
    total = 0
    checked = 0
    if 1 in items:
        first = _item1(hg)
        total += len(first)
        checked += len(hg.edges2)
        violations.extend(first[:violation_limit])

    for item in (2, 3, 4):
        if item not in items:
            continue
        low, base, free_bits = _item_ranges(cg, item)
        span = 1 << free_bits
        step = 1 << CHUNK_BITS
        starts = list(range(1, span, step))

        def run(start: int, item: int = item, low: int = low, base: int = base, span: int = span) -> _ChunkResult:
            subs = np.arange(start, min(start + step, span), dtype=np.int64)
            return _evaluate(cg, item, elementary, base | (subs << low), violation_limit, excluded)

        if jobs > 1 and len(starts) > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(run, starts))
        else:
            results = [run(start) for start in starts]
        relation = ">" if item == 4 else "<"
        for res in results:
            checked += res.checked
            total += res.count
            for mask, (lc, lq), (rc, rq) in zip(res.masks, res.lhs, res.rhs):
                if len(violations) >= violation_limit:
                    break
                violations.append(
                    Violation(item, cg.decode(mask), cg.value(lc, lq), cg.value(rc, rq), relation)
                )
        logger.debug("item %d: %d subsets in %d chunk(s)", item, span - 1, len(starts))

    return CheckReport(
        mode=mode.value,
        passed=total == 0,
        violations=violations,
        total_violations=total,
        subsets_checked=checked,
        name=name,
    )
