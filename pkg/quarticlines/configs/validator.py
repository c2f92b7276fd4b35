#!/usr/bin/env python3
"""
Line-set filters
The maximal exceptional set Ē and the geometric checks a candidate set of
(−2)-line classes must survive: the triangle property, the J*-series rule and
the exceptional-divisor trial. Filters never raise on a geometric failure;
they return a FilterResult with the violating triangles or edges.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.enumeration import DualVector, canonical_order, pairing_table, vec_plus
from ..core.lattice import Lattice, discriminant_group

logger = logging.getLogger(__name__)


@dataclass
class FilterResult:
    """Result of one filter on one vector set."""
    passed: bool
    issues: List[str] = field(default_factory=list)
    witnesses: List[Tuple[int, ...]] = field(default_factory=list)
    name: str = ''

    def to_dict(self) -> dict:
        return {
            'filter': self.name,
            'passed': self.passed,
            'issues': list(self.issues),
            'witnesses': [list(w) for w in self.witnesses],
        }


# ----------------------------------------------------------------------
# Ē_max
# ----------------------------------------------------------------------

@lru_cache(maxsize=None)
def lattice_roots(lattice: Lattice) -> Tuple[DualVector, ...]:
    """Vec⁺(Σ, 0): the (−2)-roots of Σ."""
    return tuple(vec_plus(lattice, discriminant_group(lattice).zero()))


@dataclass
class EmaxResult:
    """Roots compatible with V; each ± pair appears once."""
    roots: List[DualVector] = field(default_factory=list)
    free: List[DualVector] = field(default_factory=list)

    @property
    def all_roots(self) -> List[DualVector]:
        return list(self.roots) + list(self.free)

    @property
    def size(self) -> int:
        return len(self.roots) + len(self.free)

    def __len__(self) -> int:
        return self.size

    def __bool__(self) -> bool:
        return self.size > 0

    def to_dict(self) -> dict:
        return {
            'size': self.size,
            'roots': [r.to_dict() for r in self.roots],
            'free': [r.to_dict() for r in self.free],
        }


def emax(vectors: Sequence[DualVector], lattice: Lattice,
         lambdas: Sequence[DualVector] = ()) -> EmaxResult:
    """
    All roots e with (a) e·l ≥ 0 for l ∈ V ∪ lambdas and (b) l₁·l₂ = q0 + 2
    whenever e·l₁ = e·l₂ = 1 for distinct l₁, l₂ ∈ V.

    Roots orthogonal to everything come in ± pairs and are listed once under
    ``free``.
    """
    roots = list(lattice_roots(lattice))
    if not roots:
        return EmaxResult()
    vectors, lambdas = list(vectors), list(lambdas)
    checked = vectors + lambdas
    if not checked:
        return EmaxResult(free=[r for r in roots if r.sort_key()[1] == 0])

    table = pairing_table(roots, checked)
    values = table.numerators
    ok = (values >= 0).all(axis=1)
    orthogonal = (values == 0).all(axis=1)
    one = table.mask(1)[:, :len(vectors)]

    inner = None
    if vectors:
        q0 = vectors[0].norm
        inner = pairing_table(vectors).mask(q0 + 2)

    result = EmaxResult()
    for index in np.nonzero(ok)[0]:
        root = roots[index]
        if inner is not None:
            meets = np.nonzero(one[index])[0]
            if len(meets) > 1:
                block = inner[np.ix_(meets, meets)]
                np.fill_diagonal(block, True)
                if not block.all():
                    continue
        if orthogonal[index]:
            if root.sort_key()[1] == 0:
                result.free.append(root)
        else:
            result.roots.append(root)
    result.roots = canonical_order(result.roots)
    result.free = canonical_order(result.free)
    logger.debug(f"Ē_max: {len(result.roots)} roots, {len(result.free)} free pairs")
    return result


# ----------------------------------------------------------------------
# Triangles
# ----------------------------------------------------------------------

def _adjacency(vectors: Sequence[DualVector], meet: Fraction) -> np.ndarray:
    adjacent = pairing_table(list(vectors)).mask(meet)
    np.fill_diagonal(adjacent, False)
    return adjacent


def triangles(vectors: Sequence[DualVector]) -> List[Tuple[int, int, int]]:
    """Index triples of pairwise intersecting lines (pairing q0 + 3)."""
    if len(vectors) < 3:
        return []
    adjacent = _adjacency(vectors, vectors[0].norm + 3)
    out = []
    for i, j in zip(*np.nonzero(np.triu(adjacent, k=1))):
        for k in np.nonzero(adjacent[i] & adjacent[j])[0]:
            if k > j:
                out.append((int(i), int(j), int(k)))
    return out


def _root_meets(roots: Sequence[DualVector], vectors: Sequence[DualVector]) -> np.ndarray:
    if not roots or not vectors:
        return np.zeros((len(roots), len(vectors)), dtype=bool)
    return pairing_table(list(roots), list(vectors)).mask(1)


def triangle_filter(vectors: Sequence[DualVector], roots: Sequence[DualVector] = (),
                    witness_pool: Optional[Sequence[DualVector]] = None) -> FilterResult:
    """
    Every triangle {l1, l2, l3} needs a root of ``roots`` meeting one of its
    lines, or a fourth line meeting all three. The fourth line is looked for
    in V unless ``witness_pool`` is given.
    """
    vectors = list(vectors)
    found = triangles(vectors)
    if not found:
        return FilterResult(True, name='triangle')
    q0 = vectors[0].norm
    met = _root_meets(list(roots), vectors).any(axis=0)
    pool = vectors if witness_pool is None else list(witness_pool)
    fourth = pairing_table(vectors, pool).mask(q0 + 3)

    bad = []
    for tri in found:
        if met[list(tri)].any():
            continue
        if fourth[list(tri)].all(axis=0).any():
            continue
        bad.append(tri)
    issues = [f"triangle {list(t)} has no fourth line and no singular point" for t in bad]
    return FilterResult(not bad, issues, bad, name='triangle')


def series_filter_jstar(vectors: Sequence[DualVector], has_ell_cross: bool,
                        roots: Sequence[DualVector] = ()) -> FilterResult:
    """
    With ℓ×, every edge (an A2) must lie on a triangle of V or touch a root of
    ``roots``; without ℓ×, V may contain no triangle at all.
    """
    vectors = list(vectors)
    if len(vectors) < 2:
        return FilterResult(True, name='jstar')
    if not has_ell_cross:
        found = triangles(vectors)
        issues = [f"triangle {list(t)} forces the line ℓ×" for t in found]
        return FilterResult(not found, issues, list(found), name='jstar')

    adjacent = _adjacency(vectors, vectors[0].norm + 3)
    met = _root_meets(list(roots), vectors).any(axis=0)
    bad = []
    for i, j in zip(*np.nonzero(np.triu(adjacent, k=1))):
        if met[i] or met[j] or (adjacent[i] & adjacent[j]).any():
            continue
        bad.append((int(i), int(j)))
    issues = [f"edge {list(e)} spans a plane with ℓ× and no fourth line" for e in bad]
    return FilterResult(not bad, issues, bad, name='jstar')


# ----------------------------------------------------------------------
# Filter chain
# ----------------------------------------------------------------------

class BaseFilter(ABC):
    """A pass/fail check of a vector set against a set of exceptional roots."""
    name = 'base'

    @abstractmethod
    def check(self, vectors: Sequence[DualVector],
              roots: Sequence[DualVector] = ()) -> FilterResult:
        pass


class TriangleFilter(BaseFilter):
    name = 'triangle'

    def __init__(self, witness_pool: Optional[Sequence[DualVector]] = None):
        self.witness_pool = witness_pool

    def check(self, vectors, roots=()):
        return triangle_filter(vectors, roots, self.witness_pool)


class JStarFilter(BaseFilter):
    name = 'jstar'

    def __init__(self, has_ell_cross: bool = True):
        self.has_ell_cross = has_ell_cross

    def check(self, vectors, roots=()):
        return series_filter_jstar(vectors, self.has_ell_cross, roots)


class CompositeFilter(BaseFilter):
    """Run several filters and merge their verdicts."""
    name = 'composite'

    def __init__(self, filters: List[BaseFilter]):
        self.filters = filters

    def check(self, vectors, roots=()):
        issues: List[str] = []
        witnesses: List[Tuple[int, ...]] = []
        passed = True
        for item in self.filters:
            result = item.check(vectors, roots)
            passed = passed and result.passed
            issues.extend(f"{result.name}: {issue}" for issue in result.issues)
            witnesses.extend(result.witnesses)
        return FilterResult(passed, issues, witnesses, name=self.name)


@dataclass
class ExceptionalTrial:
    """One choice of exceptional roots and the verdict it gets."""
    roots: Tuple[DualVector, ...]
    result: FilterResult

    def to_dict(self) -> dict:
        return {'roots': [r.to_dict() for r in self.roots], 'result': self.result.to_dict()}


class ExceptionalTrialFilter(BaseFilter):
    """
    Retry the inner filter with every subset of Ē of size
    ``max_exceptional`` (all of Ē when it is smaller); the set survives if
    one choice passes.
    """
    name = 'exceptional-trial'

    def __init__(self, inner: BaseFilter, max_exceptional: int = 1):
        self.inner = inner
        self.max_exceptional = max_exceptional
        self.trials: List[ExceptionalTrial] = []

    def subsets(self, roots: Sequence[DualVector]) -> List[Tuple[DualVector, ...]]:
        roots = tuple(roots)
        if len(roots) <= self.max_exceptional:
            return [roots]
        return list(combinations(roots, self.max_exceptional))

    def check(self, vectors, roots=()):
        self.trials = []
        for subset in self.subsets(roots):
            result = self.inner.check(vectors, subset)
            self.trials.append(ExceptionalTrial(subset, result))
            if result.passed:
                return FilterResult(True, name=self.name)
        issues = [f"all {len(self.trials)} choices of exceptional roots fail"]
        witnesses = [w for trial in self.trials[:1] for w in trial.result.witnesses]
        return FilterResult(False, issues, witnesses, name=self.name)


def create_filter(filter_type: str = 'triangle', **kwargs) -> BaseFilter:
    """
    Factory function to create filters.

    Args:
        filter_type: "triangle", "jstar", "composite" or "exceptional-trial"
        **kwargs: Arguments passed to the filter constructor
    """
    filters: Dict[str, type] = {
        'triangle': TriangleFilter,
        'jstar': JStarFilter,
        'composite': CompositeFilter,
        'exceptional-trial': ExceptionalTrialFilter,
    }
    if filter_type not in filters:
        raise ValueError(f"Unknown filter type: {filter_type}")
    return filters[filter_type](**kwargs)
