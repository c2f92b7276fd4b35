"""
Dual vectors of a prescribed norm in a prescribed discriminant class.

vec(Σ, γ, q) is the finite set {v ∈ Σ∨ : v² = q, v ≡ γ mod Σ}. Vec⁺ and Vec
are the windows -4 < q ≤ -2 and -2 < q ≤ 0 respectively.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .exact import as_fraction, coset_vectors, format_rational, mod2
from .lattice import DiscClass, Lattice, discriminant_group

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DualVector:
    """An element of Σ∨ in lattice coordinates, with its cached norm."""
    coords: Tuple[Fraction, ...]
    norm: Fraction
    lattice: Lattice = field(compare=False, repr=False)
    lattice_name: str = ''

    @classmethod
    def from_coords(cls, lattice: Lattice, coords: Sequence) -> 'DualVector':
        coords = tuple(as_fraction(x) for x in coords)
        return cls(coords=coords, norm=lattice.norm(coords), lattice=lattice,
                   lattice_name=lattice.name)

    @property
    def denominator(self) -> int:
        return lcm(1, *(x.denominator for x in self.coords))

    @property
    def numerators(self) -> Tuple[int, ...]:
        d = self.denominator
        return tuple(int(x * d) for x in self.coords)

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def __neg__(self) -> 'DualVector':
        return DualVector(tuple(-x for x in self.coords), self.norm, self.lattice,
                          self.lattice_name)

    def __add__(self, other: 'DualVector') -> 'DualVector':
        _check_same_lattice(self, other)
        return DualVector.from_coords(self.lattice,
                                      [a + b for a, b in zip(self.coords, other.coords)])

    def sort_key(self) -> Tuple:
        """Sign-normalised coordinates first, then the sign itself."""
        lead = next((x for x in self.coords if x), Fraction(0))
        if lead < 0:
            return tuple(-x for x in self.coords), 1
        return self.coords, 0

    def label(self) -> str:
        return '(' + ', '.join(str(format_rational(x)) for x in self.coords) + ')'

    def to_dict(self) -> dict:
        return {
            'numerators': list(self.numerators),
            'denominator': self.denominator,
            'norm': format_rational(self.norm),
        }


@dataclass(frozen=True)
class VecQuery:
    lattice: Lattice
    cls: DiscClass
    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, 'q', as_fraction(self.q))

    @property
    def parity_ok(self) -> bool:
        return mod2(self.q) == self.cls.q_value


def _check_same_lattice(u: DualVector, v: DualVector):
    if u.lattice_name != v.lattice_name or (
        u.lattice is not v.lattice and u.lattice.gram != v.lattice.gram
    ):
        raise ValueError(
            f"Vectors live in different lattices: {u.lattice_name} vs {v.lattice_name}"
        )


def canonical_order(vectors: Iterable[DualVector]) -> List[DualVector]:
    return sorted(vectors, key=DualVector.sort_key)


def enumerate_vectors(query: VecQuery) -> List[DualVector]:
    """
    Every v ∈ Σ∨ with v² = q in the class γ, in canonical order.

    Raises ValueError for q > 0. A parity mismatch q ≢ γ² mod 2 returns an
    empty list with a warning.
    """
    lattice, cls, q = query.lattice, query.cls, query.q
    if cls.lattice_name != lattice.name:
        raise ValueError(f"Class of {cls.lattice_name} used with lattice {lattice.name}")
    if q > 0:
        raise ValueError(f"Norm {q} is positive; {lattice.name} is negative definite")
    if q == 0:
        if cls.is_zero:
            return [DualVector.from_coords(lattice, [0] * lattice.rank)]
        return []
    if lattice.is_even and not query.parity_ok:
        logger.warning(
            f"vec({lattice.name}, {list(cls.coords)}, {q}): class square is "
            f"{cls.q_value} mod 2, so the set is empty"
        )
        return []

    group = discriminant_group(lattice)
    found = []
    for coords, _ in coset_vectors(lattice.positive_form(), cls.coset_rep, -q, exact=True):
        vec = DualVector(coords=coords, norm=q, lattice=lattice, lattice_name=lattice.name)
        if group.coordinates(coords) != cls.coords:
            raise RuntimeError(f"Enumerated {vec.label()} outside class {list(cls.coords)}")
        found.append(vec)
    logger.debug(f"vec({lattice.name}, {list(cls.coords)}, {q}) = {len(found)}")
    return canonical_order(found)


def window_norm(cls: DiscClass, low: int) -> Fraction:
    """The unique q ∈ (low, low + 2] with q ≡ γ² mod 2."""
    q = cls.q_value + low
    return q if q > low else q + 2


def vec_plus(lattice: Lattice, cls: DiscClass) -> List[DualVector]:
    return enumerate_vectors(VecQuery(lattice, cls, window_norm(cls, -4)))


def vec_std(lattice: Lattice, cls: DiscClass) -> List[DualVector]:
    return enumerate_vectors(VecQuery(lattice, cls, window_norm(cls, -2)))


def pairing(u: DualVector, v: DualVector) -> Fraction:
    _check_same_lattice(u, v)
    return u.lattice.dot(u.coords, v.coords)


def reflect(vector: DualVector, root: DualVector) -> DualVector:
    """Reflection in a root of square -2: x ↦ x + (x·r) r."""
    if root.norm != -2:
        raise ValueError(f"Reflection needs a (-2)-root, got norm {root.norm}")
    k = pairing(vector, root)
    coords = tuple(a + k * b for a, b in zip(vector.coords, root.coords))
    return DualVector(coords, vector.norm, vector.lattice, vector.lattice_name)


@dataclass
class PairingTable:
    """All pairings rows × cols as integer numerators over one denominator."""
    numerators: np.ndarray
    denominator: int

    def value(self, i: int, j: int) -> Fraction:
        return Fraction(int(self.numerators[i, j]), self.denominator)

    def mask(self, value) -> np.ndarray:
        value = as_fraction(value) * self.denominator
        if value.denominator != 1:
            return np.zeros(self.numerators.shape, dtype=bool)
        return self.numerators == int(value)

    def isin(self, values: Iterable) -> np.ndarray:
        out = np.zeros(self.numerators.shape, dtype=bool)
        for value in values:
            out |= self.mask(value)
        return out


def _numerator_matrix(vectors: Sequence[DualVector], den: int) -> np.ndarray:
    rank = vectors[0].lattice.rank if vectors else 0
    out = np.zeros((len(vectors), rank), dtype=np.int64)
    for i, v in enumerate(vectors):
        out[i] = [int(x * den) for x in v.coords]
    return out


def pairing_table(rows: Sequence[DualVector],
                  cols: Optional[Sequence[DualVector]] = None) -> PairingTable:
    cols = rows if cols is None else cols
    if rows and cols:
        _check_same_lattice(rows[0], cols[0])
    lattice = (rows or cols)[0].lattice if (rows or cols) else None
    if lattice is None or not rows or not cols:
        return PairingTable(np.zeros((len(rows), len(cols)), dtype=np.int64), 1)
    d_rows = lcm(1, *(v.denominator for v in rows))
    d_cols = lcm(1, *(v.denominator for v in cols))
    d_gram = lcm(1, *(x.denominator for row in lattice.gram for x in row))
    gram = np.array([[int(x * d_gram) for x in row] for row in lattice.gram], dtype=np.int64)
    table = _numerator_matrix(rows, d_rows) @ gram @ _numerator_matrix(cols, d_cols).T
    den = d_rows * d_cols * d_gram
    common = int(np.gcd.reduce(np.append(table.ravel(), den)))
    return PairingTable(table // common, den // common)


def pairing_histogram(rows: Sequence[DualVector],
                      cols: Optional[Sequence[DualVector]] = None) -> Dict[Fraction, int]:
    """Pairing values over unordered distinct pairs (or all row × col pairs)."""
    table = pairing_table(rows, cols)
    counts: Counter = Counter()
    if cols is None:
        idx = np.triu_indices(len(rows), k=1)
        values = table.numerators[idx]
    else:
        values = table.numerators.ravel()
    for value, count in zip(*np.unique(values, return_counts=True)):
        counts[Fraction(int(value), table.denominator)] = int(count)
    return dict(sorted(counts.items()))


def compatible_with(eta_vectors: Sequence[DualVector], lambda_vectors: Sequence[DualVector],
                    allowed: Iterable) -> List[DualVector]:
    """η-vectors whose pairing with every λ-vector lies in ``allowed``."""
    if not eta_vectors or not lambda_vectors:
        return list(eta_vectors)
    ok = pairing_table(eta_vectors, lambda_vectors).isin(list(allowed)).all(axis=1)
    return [v for v, keep in zip(eta_vectors, ok) if keep]
