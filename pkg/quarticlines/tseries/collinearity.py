#!/usr/bin/env python3
"""
Collinearity systems p_i + p_j + p_k = 0 over the group of smooth points of
the plane cubic E0, and when they admit twelve pairwise distinct solutions.

The group is (ℝ/ℤ)^t × ℝ^r × ℤ/f. A solution splits factor by factor:
ℝ-factors only see the rational kernel of M; an ℝ/ℤ-factor sees the rational
kernel plus the torsion part ⊕ (1/d_k)ℤ/ℤ read off the Smith form; a ℤ/f
factor sees ker(M mod f). Point pairs that the rational kernel cannot
separate have to be separated by the torsion and finite choices.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm, prod
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.exact import (
    in_row_space,
    integer_kernel,
    nullspace_mod_p,
    rref_rational,
    smith_normal_form,
    span_equal_mod_p,
)
from .fixtures import IncidenceMatrix, N_POINTS

logger = logging.getLogger(__name__)

IMPOSSIBLE = 'impossible-distinct'
POSSIBLE = 'possible'
UNDETERMINED = 'undetermined'

DEFAULT_MAX_ELEMENTS = 200_000
DEFAULT_MAX_WORK = 20_000_000


@dataclass(frozen=True)
class GroupSpec:
    """(ℝ/ℤ)^torus × ℝ^real × ∏ ℤ/f."""
    key: str
    label: str
    torus: int
    real: int
    finite: Tuple[int, ...] = ()
    singularity: str = ''


GROUPS: Dict[str, GroupSpec] = {
    'torus': GroupSpec('torus', '(ℝ/ℤ)²', 2, 0, (), 'P8'),
    'Gm': GroupSpec('Gm', 'ℝ/ℤ × ℝ', 1, 1, (), 'P9'),
    'Ga': GroupSpec('Ga', 'ℝ²', 0, 2, (), 'Q10'),
    'Gm+Z2': GroupSpec('Gm+Z2', 'Gm × ℤ/2', 1, 1, (2,), 'T3,4,4'),
    'Ga+Z2': GroupSpec('Ga+Z2', 'Ga × ℤ/2', 0, 2, (2,), 'S11'),
    'Gm+Z3': GroupSpec('Gm+Z3', 'Gm × ℤ/3', 1, 1, (3,), 'T4,4,4'),
    # three concurrent lines: the component group is ℤ/3
    'Ga+Z3': GroupSpec('Ga+Z3', 'Ga × ℤ/3', 0, 2, (3,), 'U12'),
}
_GROUP_ALIASES = {
    'G': 'torus', 'P8': 'torus', 'GM': 'Gm', 'P9': 'Gm', 'GA': 'Ga', 'Q10': 'Ga',
    'T344': 'Gm+Z2', 'S11': 'Ga+Z2', 'T444': 'Gm+Z3', 'U12': 'Ga+Z3',
}


def get_group(name: str) -> GroupSpec:
    key = name.strip()
    if key in GROUPS:
        return GROUPS[key]
    norm = key.upper().replace(' ', '').replace(',', '').replace('×', '+').replace('*', '+')
    for candidate in GROUPS:
        if candidate.upper() == norm:
            return GROUPS[candidate]
    if norm in _GROUP_ALIASES:
        return GROUPS[_GROUP_ALIASES[norm]]
    raise ValueError(f"Unknown group: {name} (known: {', '.join(GROUPS)})")


@dataclass(frozen=True)
class CollinearitySystem:
    """One row per collinear triple; columns are the points p_1..p_12."""
    name: str
    matrix: Tuple[Tuple[int, ...], ...]
    n_points: int = N_POINTS

    @classmethod
    def from_incidence(cls, incidence: IncidenceMatrix) -> 'CollinearitySystem':
        return cls(incidence.name, tuple(tuple(r) for r in incidence.transposed()),
                   incidence.n_points)

    def violations(self) -> List[str]:
        return [
            f"{self.name}: relation {k + 1} has {sum(row)} terms"
            for k, row in enumerate(self.matrix)
            if sorted(set(row)) != [0, 1] or sum(row) != 3
        ]

    def rows(self) -> List[List[int]]:
        return [list(r) for r in self.matrix]


def _pairs(n: int) -> List[Tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


def _equal_masks(values: np.ndarray, pairs: Sequence[Tuple[int, int]]) -> np.ndarray:
    """Boolean |elements| × |pairs| table: True where the two points coincide."""
    if not pairs:
        return np.zeros((values.shape[0], 0), dtype=bool)
    left = np.array([i for i, _ in pairs])
    right = np.array([j for _, j in pairs])
    return values[:, left] == values[:, right]


def _to_int(row: np.ndarray) -> int:
    out = 0
    for bit, flag in enumerate(row):
        if flag:
            out |= 1 << bit
    return out


def _distinct_masks(table: np.ndarray) -> Dict[int, int]:
    """mask -> index of the first element producing it."""
    if table.shape[0] == 0:
        return {}
    unique, index = np.unique(table, axis=0, return_index=True)
    return {_to_int(row): int(i) for row, i in zip(unique, index)}


def _minimal(masks: Dict[int, object]) -> Dict[int, object]:
    """Drop masks that contain another mask."""
    kept: Dict[int, object] = {}
    for mask in sorted(masks, key=lambda m: (bin(m).count('1'), m)):
        if any(k & ~mask == 0 for k in kept):
            continue
        kept[mask] = masks[mask]
    return kept


def _enumerate_group(generators: Sequence[Sequence[int]], orders: Sequence[int],
                     modulus: int, width: int) -> Tuple[np.ndarray, np.ndarray]:
    """All Σ a_k g_k mod modulus with 0 ≤ a_k < orders[k]; returns (coefficients, values)."""
    if not generators:
        return np.zeros((1, 0), dtype=np.int64), np.zeros((1, width), dtype=np.int64)
    coeffs = np.array(list(itertools.product(*(range(o) for o in orders))), dtype=np.int64)
    gens = np.array(generators, dtype=np.int64) % modulus
    return coeffs, (coeffs @ gens) % modulus


# ----------------------------------------------------------------------
# Smith-form analysis
# ----------------------------------------------------------------------

@dataclass
class SnfAnalysis:
    name: str
    rank: int
    invariant_factors: List[int]
    rational_kernel: List[Tuple[int, ...]]
    kernel_mod: Dict[int, List[Tuple[int, ...]]]

    def factors_divide(self, n: int) -> bool:
        return all(n % d == 0 for d in self.invariant_factors)

    @property
    def torsion_exponent(self) -> int:
        return lcm(1, *self.invariant_factors)

    def rational_kernel_is(self, vectors: Sequence[Sequence[int]]) -> bool:
        """Kernel equality up to base change, by reduced echelon forms."""
        return rref_rational(self.rational_kernel) == rref_rational(vectors)

    def kernel_mod_is(self, p: int, vectors: Sequence[Sequence[int]]) -> bool:
        return span_equal_mod_p(self.kernel_mod[p], list(vectors), p)

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'rank': self.rank,
            'invariant_factors': list(self.invariant_factors),
            'rational_kernel': [list(v) for v in self.rational_kernel],
            'kernel_mod': {str(p): [list(v) for v in basis]
                           for p, basis in sorted(self.kernel_mod.items())},
        }


def snf_analysis(system: CollinearitySystem, primes: Sequence[int] = (2, 3)) -> SnfAnalysis:
    rows = system.rows()
    if rows:
        snf = smith_normal_form(rows)
        rank, factors = snf.rank, [abs(d) for d in snf.invariant_factors]
        if not snf.verify():
            raise RuntimeError(f"Smith form of {system.name} failed to verify")
    else:
        rank, factors = 0, []
    analysis = SnfAnalysis(
        name=system.name,
        rank=rank,
        invariant_factors=factors,
        rational_kernel=integer_kernel(rows, ncols=system.n_points),
        kernel_mod={p: nullspace_mod_p(rows, p, ncols=system.n_points) for p in primes},
    )
    logger.debug(f"{system.name}: rank {rank}, invariant factors {factors}")
    return analysis


def sum_relation_check(system: CollinearitySystem) -> bool:
    """Does p_1 + ... + p_12 = 0 follow from the system?"""
    if not system.matrix:
        return False
    return in_row_space([1] * system.n_points, system.rows())


# ----------------------------------------------------------------------
# Torsion solutions
# ----------------------------------------------------------------------

@dataclass
class TorsionSolution:
    """Twelve distinct points of (ℤ/N)^dim, i.e. of ((1/N)ℤ/ℤ)^dim ⊂ (ℝ/ℤ)^dim."""
    system: str
    modulus: int
    points: Tuple[Tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.points[0]) if self.points else 0

    def verify(self, system: CollinearitySystem) -> bool:
        if len(set(self.points)) != len(self.points):
            return False
        for row in system.matrix:
            for axis in range(self.dim):
                if sum(c * p[axis] for c, p in zip(row, self.points)) % self.modulus:
                    return False
        return True

    def to_dict(self) -> dict:
        return {
            'system': self.system,
            'modulus': self.modulus,
            'points': [list(p) for p in self.points],
        }


def _kernel_mod_n(system: CollinearitySystem, modulus: int) -> Tuple[List[List[int]], List[int]]:
    """Generators and orders of ker(M mod N), read off the Smith form."""
    rows = system.rows()
    n = system.n_points
    if not rows:
        return [[int(i == j) for i in range(n)] for j in range(n)], [modulus] * n
    snf = smith_normal_form(rows)
    gens, orders = [], []
    for k in range(n):
        column = [snf.right[i][k] for i in range(n)]
        if k < snf.rank:
            order = gcd(abs(snf.diag[k]), modulus)
            if order == 1:
                continue
            gens.append([c * (modulus // order) for c in column])
            orders.append(order)
        else:
            gens.append(column)
            orders.append(modulus)
    return gens, orders


def torsion_solution_search(system: CollinearitySystem, modulus: int, dim: int = 2,
                            max_elements: int = DEFAULT_MAX_ELEMENTS) -> Optional[TorsionSolution]:
    """
    A solution of M·p ≡ 0 in (ℤ/N)^dim with pairwise distinct points, or None.
    """
    if modulus < 2:
        raise ValueError(f"Modulus must be at least 2, got {modulus}")
    if dim not in (1, 2):
        raise ValueError(f"Only one- and two-dimensional tori are supported, got {dim}")
    n = system.n_points
    if modulus ** dim < n:
        logger.debug(f"{system.name}: (ℤ/{modulus})^{dim} has fewer than {n} points")
        return None
    gens, orders = _kernel_mod_n(system, modulus)
    size = prod(orders)
    if size > max_elements:
        raise ValueError(f"ker(M mod {modulus}) of {system.name} has {size} elements "
                         f"(limit {max_elements})")
    _, values = _enumerate_group(gens, orders, modulus, n)
    values = np.unique(values, axis=0)
    masks = _distinct_masks(_equal_masks(values, _pairs(n)))

    if dim == 1:
        if 0 not in masks:
            return None
        row = values[masks[0]]
        points = tuple((int(x),) for x in row)
    else:
        minimal = _minimal(masks)
        found = None
        for a in minimal:
            b = next((m for m in minimal if a & m == 0), None)
            if b is not None:
                found = (minimal[a], minimal[b])
                break
        if found is None:
            return None
        first, second = values[found[0]], values[found[1]]
        points = tuple((int(x), int(y)) for x, y in zip(first, second))
    solution = TorsionSolution(system.name, modulus, points)
    if not solution.verify(system):
        raise RuntimeError(f"Torsion solution for {system.name} mod {modulus} failed to verify")
    return solution


def modulus_sweep(system: CollinearitySystem, max_modulus: int = 60, dim: int = 2,
                  start: int = 2) -> Optional[TorsionSolution]:
    """The solution at the smallest modulus N ≤ max_modulus, if any."""
    for modulus in range(max(2, start), max_modulus + 1):
        try:
            solution = torsion_solution_search(system, modulus, dim)
        except ValueError as e:
            logger.warning(f"Skipping modulus {modulus}: {e}")
            continue
        if solution is not None:
            logger.info(f"{system.name}: distinct solution in (ℤ/{modulus})^{dim}")
            return solution
    logger.info(f"{system.name}: no distinct solution in (ℤ/N)^{dim} for N ≤ {max_modulus}")
    return None


# ----------------------------------------------------------------------
# Realizability over the seven groups
# ----------------------------------------------------------------------

@dataclass
class RealizabilityVerdict:
    system: str
    group: GroupSpec
    status: str
    reasons: List[str] = field(default_factory=list)
    witness: Optional[dict] = None
    certificate: Optional[TorsionSolution] = None

    @property
    def possible(self) -> bool:
        return self.status == POSSIBLE

    def to_dict(self) -> dict:
        return {
            'system': self.system,
            'group': self.group.key,
            'group_label': self.group.label,
            'status': self.status,
            'reasons': list(self.reasons),
            'witness': self.witness,
            'certificate': self.certificate.to_dict() if self.certificate else None,
        }


def unseparated_pairs(system: CollinearitySystem,
                      kernel: Optional[Sequence[Sequence[int]]] = None) -> List[Tuple[int, int]]:
    """Point pairs on which every rational kernel vector agrees."""
    if kernel is None:
        kernel = integer_kernel(system.rows(), ncols=system.n_points)
    return [(i, j) for i, j in _pairs(system.n_points) if all(v[i] == v[j] for v in kernel)]


def _torsion_part(system: CollinearitySystem, pairs) -> Tuple[int, Dict[int, Tuple], int]:
    """Masks of the torsion subgroup ⊕ (1/d_k)ℤ/ℤ of an ℝ/ℤ-factor, in units of 1/D."""
    rows = system.rows()
    n = system.n_points
    snf = smith_normal_form(rows)
    factors = [(k, abs(snf.diag[k])) for k in range(snf.rank) if abs(snf.diag[k]) > 1]
    den = lcm(1, *(d for _, d in factors))
    gens = [[snf.right[i][k] * (den // d) for i in range(n)] for k, d in factors]
    orders = [d for _, d in factors]
    size = prod(orders)
    if size > DEFAULT_MAX_ELEMENTS:
        return den, {}, size
    _, values = _enumerate_group(gens, orders, den, n)
    masks = _distinct_masks(_equal_masks(values, pairs))
    return den, {m: tuple(Fraction(int(x), den) for x in values[i]) for m, i in masks.items()}, size


def _finite_part(system: CollinearitySystem, p: int, pairs) -> Tuple[Dict[int, Tuple], int]:
    basis = nullspace_mod_p(system.rows(), p, ncols=system.n_points)
    _, values = _enumerate_group(basis, [p] * len(basis), p, system.n_points)
    masks = _distinct_masks(_equal_masks(values, pairs))
    return {m: tuple(int(x) for x in values[i]) for m, i in masks.items()}, len(basis)


def realizability_verdict(system: CollinearitySystem, group, certify: bool = True,
                          max_modulus: int = 60,
                          max_work: int = DEFAULT_MAX_WORK) -> RealizabilityVerdict:
    """
    Decide whether the system has pairwise distinct solutions in ``group``
    (a GroupSpec or a group name).
    """
    group = group if isinstance(group, GroupSpec) else get_group(group)
    rows = system.rows()
    verdict = RealizabilityVerdict(system.name, group, UNDETERMINED)
    reasons = verdict.reasons
    kernel = integer_kernel(rows, ncols=system.n_points)
    rank = system.n_points - len(kernel)
    pairs = unseparated_pairs(system, kernel)
    reasons.append(f"rank M = {rank}; the rational kernel has dimension {len(kernel)} "
                   f"and leaves {len(pairs)} point pairs unseparated")
    if not pairs:
        verdict.status = POSSIBLE
        reasons.append("a generic point of the connected solution group is distinct")
        return _certify(verdict, system, certify, max_modulus)

    options: List[Tuple[str, Dict[int, Tuple]]] = []
    if group.torus:
        den, torsion, size = _torsion_part(system, pairs)
        if not torsion:
            reasons.append(f"torsion subgroup of order {size} is too large to search")
            return verdict
        reasons.append(f"invariant factors divide {den}: ℝ/ℤ-components on the unseparated "
                       f"pairs are {den}-periodic ({size} torsion points)")
        options += [(f"torus{k + 1}", torsion) for k in range(group.torus)]
    elif group.real:
        reasons.append("torsion-free factors only see the rational kernel")
    for p in group.finite:
        finite, dim = _finite_part(system, p, pairs)
        reasons.append(f"ker(M ⊗ 𝔽{p}) has dimension {dim}")
        options.append((f"Z{p}", finite))
    if not options:
        verdict.status = IMPOSSIBLE
        reasons.append(f"{len(pairs)} pairs coincide in every solution")
        return verdict

    separable = 0
    for _, masks in options:
        for mask in masks:
            separable |= ~mask
    full = (1 << len(pairs)) - 1
    if separable & full != full:
        stuck = [pairs[b] for b in range(len(pairs)) if not (separable >> b) & 1]
        verdict.status = IMPOSSIBLE
        reasons.append("no component separates " + ', '.join(
            f"p{i + 1}=p{j + 1}" for i, j in stuck[:6]) + (' ...' if len(stuck) > 6 else ''))
        return verdict

    # level-wise AND over the factors, keeping only minimal masks
    reachable: Dict[int, Tuple] = {full: ()}
    for label, masks in options:
        masks = _minimal(masks)
        if len(reachable) * len(masks) > max_work:
            reasons.append(f"search over {label} exceeds {max_work} combinations")
            return verdict
        step: Dict[int, Tuple] = {}
        for current, chosen in reachable.items():
            for mask, values in masks.items():
                combined = current & mask
                if combined not in step:
                    step[combined] = chosen + ((label, values),)
        reachable = _minimal(step)
        if 0 in reachable:
            break
    if 0 in reachable:
        verdict.status = POSSIBLE
        verdict.witness = {label: [str(v) for v in values] for label, values in reachable[0]}
        reasons.append("torsion and finite components separate every remaining pair")
        return _certify(verdict, system, certify, max_modulus)
    verdict.status = IMPOSSIBLE
    reasons.append("every choice of torsion and finite components leaves two points equal")
    return verdict


def _certify(verdict: RealizabilityVerdict, system: CollinearitySystem, certify: bool,
             max_modulus: int) -> RealizabilityVerdict:
    group = verdict.group
    if not certify or not group.torus or group.finite:
        return verdict
    solution = modulus_sweep(system, max_modulus, dim=group.torus)
    if solution is None:
        verdict.reasons.append(f"no torsion certificate with N ≤ {max_modulus}")
    else:
        verdict.certificate = solution
        verdict.reasons.append(f"certified by a distinct solution mod {solution.modulus}")
    return verdict
