"""
Negative-definite lattices, their duals and discriminant forms.

Gram conventions (all negative definite, the negated Cartan matrices):
    A_n  tridiagonal, -2 on the diagonal, +1 next to it
    D_n  chain d1 - ... - d(n-1), with d(n) attached to d(n-2)
    E_n  Bourbaki numbering: chain e1 - e3 - e4 - ... - en, with e2 attached to e4
    D1   the rank one lattice [-4]

A and D lattices also carry a *frame*: coordinates of the basis in the
orthogonal lattice H_N (x·y = -Σ x_i y_i), used by the symmetry code.
"""

import itertools
import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .exact import (
    as_fraction,
    bilinear,
    coset_vectors,
    determinant,
    format_rational,
    integer_kernel,
    leading_minors,
    mod1,
    mod2,
    rational_inverse,
    smith_normal_form,
)

logger = logging.getLogger(__name__)

Vector = Tuple[Fraction, ...]

E_EDGES = {
    6: [(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)],
    7: [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 4)],
    8: [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)],
}


@dataclass(frozen=True)
class Frame:
    """Basis coordinates in H_width; anchors are vectors isometries must fix."""
    width: int
    rows: Tuple[Vector, ...]
    anchors: Tuple[Vector, ...] = ()


@dataclass(frozen=True)
class Lattice:
    """A negative-definite lattice given by its Gram matrix on a named basis."""
    name: str
    gram: Tuple[Vector, ...]
    labels: Tuple[str, ...]
    frame: Optional[Frame] = None
    summands: Tuple[str, ...] = ()

    def __post_init__(self):
        gram = tuple(tuple(as_fraction(x) for x in row) for row in self.gram)
        object.__setattr__(self, 'gram', gram)
        n = len(gram)
        if any(len(row) != n for row in gram):
            raise ValueError(f"Gram matrix of {self.name} is not square")
        if len(self.labels) != n:
            raise ValueError(f"{self.name}: {len(self.labels)} labels for rank {n}")
        for i in range(n):
            for j in range(i + 1, n):
                if gram[i][j] != gram[j][i]:
                    raise ValueError(f"Gram matrix of {self.name} is not symmetric at ({i}, {j})")
        minors = leading_minors([[-x for x in row] for row in gram])
        bad = next((k for k, m in enumerate(minors) if m <= 0), None)
        if bad is not None:
            raise ValueError(
                f"{self.name} is not negative definite: leading minor {bad + 1} of -gram "
                f"is {minors[bad]}"
            )

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def det(self) -> Fraction:
        return determinant(self.gram)

    @property
    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self.gram for x in row)

    @property
    def is_even(self) -> bool:
        return self.is_integral and all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def int_gram(self) -> List[List[int]]:
        if not self.is_integral:
            raise ValueError(f"{self.name} has a non-integral Gram matrix")
        return [[int(x) for x in row] for row in self.gram]

    def dot(self, u: Sequence, v: Sequence) -> Fraction:
        if len(u) != self.rank or len(v) != self.rank:
            raise ValueError(f"Vectors of length {len(u)}, {len(v)} do not fit {self.name}")
        return as_fraction(bilinear(self.gram, u, v))

    def norm(self, v: Sequence) -> Fraction:
        return self.dot(v, v)

    def positive_form(self) -> List[List[Fraction]]:
        return [[-x for x in row] for row in self.gram]

    def inverse_gram(self) -> List[List[Fraction]]:
        return rational_inverse(self.gram)

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'gram': [[format_rational(x) for x in row] for row in self.gram],
            'labels': list(self.labels),
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'Lattice':
        return cls(
            name=data['name'],
            gram=tuple(tuple(as_fraction(x) for x in row) for row in data['gram']),
            labels=tuple(data['labels']),
        )


# ----------------------------------------------------------------------
# Constructors
# ----------------------------------------------------------------------

def _gram_from_frame(rows: Sequence[Vector]) -> Tuple[Vector, ...]:
    return tuple(
        tuple(-sum(a * b for a, b in zip(u, v)) for v in rows) for u in rows
    )


def _unit(width: int, *entries: Tuple[int, int]) -> Vector:
    vec = [Fraction(0)] * width
    for index, value in entries:
        vec[index] = Fraction(value)
    return tuple(vec)


def make_root_lattice(
    kind: str,
    rank: int,
    scale: Optional[int] = None,
    entry: Optional[int] = None,
) -> Lattice:
    """
    Standard negative-definite root lattices, D1 = [-4] and scalar forms.

    kind is one of A, D, E, scalar; ``entry`` is the diagonal value for scalar
    lattices and ``scale`` rescales the form.
    """
    kind = kind.strip()
    if rank < 1:
        raise ValueError(f"Rank must be positive, got {rank}")

    frame = None
    if kind.upper() == 'A':
        width = rank + 1
        rows = tuple(_unit(width, (i, 1), (i + 1, -1)) for i in range(rank))
        frame = Frame(width, rows, anchors=(tuple(Fraction(1) for _ in range(width)),))
        gram = _gram_from_frame(rows)
        name, labels = f"A{rank}", tuple(f"a{i + 1}" for i in range(rank))
    elif kind.upper() == 'D':
        if rank == 1:
            rows = (_unit(1, (0, 2)),)
        else:
            rows = tuple(_unit(rank, (i, 1), (i + 1, -1)) for i in range(rank - 1))
            rows += (_unit(rank, (rank - 2, 1), (rank - 1, 1)),)
        frame = Frame(rank, rows)
        gram = _gram_from_frame(rows)
        name, labels = f"D{rank}", tuple(f"d{i + 1}" for i in range(rank))
    elif kind.upper() == 'E':
        if rank not in E_EDGES:
            raise ValueError(f"E{rank} is not a root lattice (valid: E6, E7, E8)")
        g = [[Fraction(-2 if i == j else 0) for j in range(rank)] for i in range(rank)]
        for a, b in E_EDGES[rank]:
            g[a - 1][b - 1] = g[b - 1][a - 1] = Fraction(1)
        gram = tuple(tuple(row) for row in g)
        name, labels = f"E{rank}", tuple(f"e{i + 1}" for i in range(rank))
    elif kind.lower() == 'scalar':
        if entry is None:
            raise ValueError("Scalar lattices need a diagonal entry")
        gram = tuple(
            tuple(Fraction(entry if i == j else 0) for j in range(rank)) for i in range(rank)
        )
        if entry == -4 and rank == 1:
            name = "D1"
            frame = Frame(1, (_unit(1, (0, 2)),))
        else:
            name = f"[{entry}]" if rank == 1 else f"[{entry}]^{rank}"
        labels = tuple(f"s{i + 1}" for i in range(rank))
    else:
        raise ValueError(f"Unknown lattice kind: {kind} (expected A, D, E or scalar)")

    if scale is not None and scale != 1:
        gram = tuple(tuple(scale * x for x in row) for row in gram)
        name = f"{name}({scale})"
        frame = None
    return Lattice(name=name, gram=gram, labels=labels, frame=frame, summands=(name,))


def dual_lattice(lattice: Lattice, scale: int = 1) -> Lattice:
    """The dual lattice on the dual basis, optionally rescaled (A2v(4) and friends)."""
    inv = lattice.inverse_gram()
    gram = tuple(tuple(scale * x for x in row) for row in inv)
    name = f"{lattice.name}v" + (f"({scale})" if scale != 1 else "")
    labels = tuple(f"{label}*" for label in lattice.labels)
    return Lattice(name=name, gram=gram, labels=labels, summands=(name,))


def direct_sum(parts: Sequence[Lattice]) -> Lattice:
    """Orthogonal direct sum; labels are prefixed by the summand name."""
    if not parts:
        raise ValueError("direct_sum needs at least one summand")
    if len(parts) == 1:
        return parts[0]

    n = sum(p.rank for p in parts)
    gram = [[Fraction(0)] * n for _ in range(n)]
    labels: List[str] = []
    offset = 0
    for part in parts:
        for i in range(part.rank):
            for j in range(part.rank):
                gram[offset + i][offset + j] = part.gram[i][j]
        labels.extend(f"{part.name}.{label}" for label in part.labels)
        offset += part.rank

    frame = None
    if any(p.frame for p in parts):
        width = sum(p.frame.width for p in parts if p.frame)
        rows: List[Vector] = []
        anchors: List[Vector] = []
        col = 0
        for part in parts:
            if part.frame is None:
                rows.extend(tuple(Fraction(0) for _ in range(width)) for _ in range(part.rank))
                continue
            pad_left = (Fraction(0),) * col
            pad_right = (Fraction(0),) * (width - col - part.frame.width)
            rows.extend(pad_left + r + pad_right for r in part.frame.rows)
            anchors.extend(pad_left + a + pad_right for a in part.frame.anchors)
            col += part.frame.width
        frame = Frame(width, tuple(rows), tuple(anchors))

    summands = tuple(s for p in parts for s in (p.summands or (p.name,)))
    return Lattice(
        name='+'.join(p.name for p in parts),
        gram=tuple(tuple(row) for row in gram),
        labels=tuple(labels),
        frame=frame,
        summands=summands,
    )


_TOKEN = re.compile(r'^(?P<kind>[ADE])(?P<rank>\d+)(?P<dual>v)?(?:\((?P<scale>-?\d+)\))?$')
_SCALAR = re.compile(r'^\[(?P<entry>-?\d+)\]$')


def parse_lattice(spec: str) -> Lattice:
    """Parse names like 'E7+A3', 'A1⊕D1', 'A1(4)', 'A2v(4)', '[-4]'."""
    tokens = [t.strip() for t in re.split(r'[+⊕]', spec) if t.strip()]
    if not tokens:
        raise ValueError(f"Empty lattice spec: {spec!r}")
    parts = []
    for token in tokens:
        scalar = _SCALAR.match(token)
        if scalar:
            parts.append(make_root_lattice('scalar', 1, entry=int(scalar.group('entry'))))
            continue
        match = _TOKEN.match(token)
        if not match:
            raise ValueError(f"Cannot parse lattice component {token!r}")
        scale = int(match.group('scale')) if match.group('scale') else None
        if match.group('dual'):
            base = make_root_lattice(match.group('kind'), int(match.group('rank')))
            parts.append(dual_lattice(base, scale or 1))
        else:
            parts.append(make_root_lattice(match.group('kind'), int(match.group('rank')), scale))
    return direct_sum(parts)


# ----------------------------------------------------------------------
# Discriminant groups
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class DiscClass:
    """An element of Σ∨/Σ with a canonical shortest coset representative."""
    lattice_name: str
    coords: Tuple[int, ...]
    coset_rep: Vector
    q_value: Fraction
    rep_norm: Fraction

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def to_dict(self) -> dict:
        return {
            'lattice': self.lattice_name,
            'coords': list(self.coords),
            'coset_rep': [format_rational(x) for x in self.coset_rep],
            'q_value': format_rational(self.q_value),
            'rep_norm': format_rational(self.rep_norm),
        }


@dataclass(frozen=True)
class DiscGroup:
    """Σ∨/Σ ≅ ⊕ ℤ/d_i with generators in the lattice basis."""
    lattice: Lattice
    invariant_factors: Tuple[int, ...]
    generators: Tuple[Vector, ...]
    coordinate_rows: Tuple[Tuple[int, ...], ...] = field(repr=False, default=())

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def coordinates(self, vector: Sequence) -> Tuple[int, ...]:
        """Class coordinates of a dual vector in the generator basis."""
        y = [as_fraction(bilinear(self.lattice.gram, row, vector)) for row in _basis(self.lattice.rank)]
        if any(v.denominator != 1 for v in y):
            raise ValueError(f"Vector is not in the dual of {self.lattice.name}")
        return tuple(
            int(sum(r * int(v) for r, v in zip(row, y))) % d
            for row, d in zip(self.coordinate_rows, self.invariant_factors)
        )

    def vector(self, coords: Sequence[int]) -> Vector:
        """Σ c_i g_i with every coordinate reduced into [0, 1)."""
        n = self.lattice.rank
        total = [Fraction(0)] * n
        for c, gen in zip(coords, self.generators):
            for k in range(n):
                total[k] += c * gen[k]
        return tuple(mod1(x) for x in total)

    def q_value(self, coords: Sequence[int]) -> Fraction:
        return mod2(self.lattice.norm(self.vector(coords)))

    def b_value(self, first: Sequence[int], second: Sequence[int]) -> Fraction:
        return mod1(self.lattice.dot(self.vector(first), self.vector(second)))

    def elements(self) -> Iterable[Tuple[int, ...]]:
        return itertools.product(*(range(d) for d in self.invariant_factors))

    def negate(self, coords: Sequence[int]) -> Tuple[int, ...]:
        return tuple((-c) % d for c, d in zip(coords, self.invariant_factors))

    def class_of(self, coords: Sequence[int]) -> DiscClass:
        coords = tuple(int(c) % d for c, d in zip(coords, self.invariant_factors))
        rep = canonical_representative(self.lattice, self.vector(coords))
        norm = self.lattice.norm(rep)
        return DiscClass(
            lattice_name=self.lattice.name,
            coords=coords,
            coset_rep=rep,
            q_value=mod2(norm),
            rep_norm=norm,
        )

    def zero(self) -> DiscClass:
        return self.class_of(tuple(0 for _ in self.invariant_factors))

    def to_dict(self) -> dict:
        return {
            'lattice': self.lattice.name,
            'invariant_factors': list(self.invariant_factors),
            'generators': [[format_rational(x) for x in g] for g in self.generators],
        }


def _basis(n: int) -> List[Tuple[int, ...]]:
    return [tuple(int(i == j) for j in range(n)) for i in range(n)]


_DISC_CACHE: Dict[Tuple, DiscGroup] = {}


def discriminant_group(lattice: Lattice) -> DiscGroup:
    """
    Invariant factors of coker(Gram) and generators V[:, i] / d_i, where
    U·Gram·V = diag(d) is the Smith form.
    """
    key = (lattice.name, lattice.gram)
    if key in _DISC_CACHE:
        return _DISC_CACHE[key]
    gram = lattice.int_gram()
    snf = smith_normal_form(gram)
    n = lattice.rank
    factors, generators, rows = [], [], []
    for i, d in enumerate(snf.diag):
        d = abs(d)
        if d > 1:
            factors.append(d)
            generators.append(tuple(Fraction(snf.right[k][i], d) for k in range(n)))
            rows.append(tuple(snf.left[i]))
    group = DiscGroup(
        lattice=lattice,
        invariant_factors=tuple(factors),
        generators=tuple(generators),
        coordinate_rows=tuple(rows),
    )
    if not lattice.is_even:
        logger.warning(f"{lattice.name} is odd; discriminant q-values are only defined mod 1")
    _DISC_CACHE[key] = group
    return group


def canonical_representative(lattice: Lattice, reduced: Vector) -> Vector:
    """Lexicographically minimal among the shortest vectors of the coset."""
    if not any(reduced):
        return reduced
    bound = -lattice.norm(reduced)
    best_q, best = None, None
    for vec, q in coset_vectors(lattice.positive_form(), reduced, bound):
        if best_q is None or q < best_q or (q == best_q and vec < best):
            best_q, best = q, vec
    return best


def class_pairing(lattice: Lattice, first: DiscClass, second: DiscClass) -> Fraction:
    """b(γ, δ) mod 1."""
    return mod1(lattice.dot(first.coset_rep, second.coset_rep))


def pairs_with(lattice: Lattice, other: DiscClass, value) -> Callable[[DiscClass], bool]:
    """Selector: classes γ with b(γ, other) ≡ value mod 1."""
    target = mod1(as_fraction(value))
    return lambda cls: class_pairing(lattice, cls, other) == target


def find_class(
    lattice: Lattice,
    q,
    selector: Optional[Callable[[DiscClass], bool]] = None,
) -> Optional[DiscClass]:
    """
    A class with γ² ≡ q mod 2ℤ, chosen canonically (shortest representative
    first, then lexicographic), or None when the form does not take the value.
    """
    group = discriminant_group(lattice)
    q = as_fraction(q)
    if (2 * group.exponent) % q.denominator:
        raise ValueError(
            f"q = {q} cannot be a discriminant value of {lattice.name} "
            f"(exponent {group.exponent})"
        )
    target = mod2(q)
    matches = []
    for coords in group.elements():
        if group.q_value(coords) != target:
            continue
        cls = group.class_of(coords)
        if selector is None or selector(cls):
            matches.append(cls)
    if not matches:
        logger.info(f"No class of square {q} mod 2 in {lattice.name}")
        return None
    return min(matches, key=lambda c: (-c.rep_norm, c.coset_rep))


# ----------------------------------------------------------------------
# Complements and component squares
# ----------------------------------------------------------------------

def _coords(vector) -> Vector:
    return tuple(as_fraction(x) for x in getattr(vector, 'coords', vector))


def saturated_complement_basis(lattice: Lattice, vectors: Sequence) -> List[Vector]:
    """Basis (in lattice coordinates) of {x ∈ L∨ : x·v = 0 for all v}."""
    n = lattice.rank
    rows = []
    for v in vectors:
        v = _coords(v)
        den = 1
        for x in v:
            den = den * x.denominator // _gcd(den, x.denominator)
        rows.append([int(x * den) for x in v])
    # x = G⁻¹y with y ∈ ℤⁿ, and x·v = y·v
    kernel = integer_kernel(rows, ncols=n)
    inverse = lattice.inverse_gram()
    return [
        tuple(sum(inverse[i][k] * w[k] for k in range(n)) for i in range(n)) for w in kernel
    ]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def saturated_complement(lattice: Lattice, vectors: Sequence) -> Lattice:
    """Q V^⊥ ∩ L∨ with its induced (possibly rational) form."""
    basis = saturated_complement_basis(lattice, vectors)
    gram = tuple(tuple(lattice.dot(u, v) for v in basis) for u in basis)
    return Lattice(
        name=f"{lattice.name}[V-perp]",
        gram=gram,
        labels=tuple(f"c{i + 1}" for i in range(len(basis))),
    )


def component_square(c_sq: int, kappa) -> Fraction:
    """Projected square c² = C² − κ(C² + 2)² of an exceptional component."""
    kappa = as_fraction(kappa)
    return Fraction(c_sq) - kappa * (c_sq + 2) ** 2


def isometric(first: Lattice, second: Lattice) -> bool:
    """
    Isometry test by short-vector matching: look for vectors of the second
    lattice realizing the first lattice's Gram matrix. Equal determinants make
    any such system a basis.
    """
    if first.rank != second.rank or abs(first.det) != abs(second.det):
        return False
    n = first.rank
    if n == 0:
        return True
    form = second.positive_form()
    zero = tuple(Fraction(0) for _ in range(n))
    candidates = [
        [vec for vec, _ in coset_vectors(form, zero, -first.gram[i][i], exact=True)]
        for i in range(n)
    ]
    chosen: List[Vector] = []

    def extend(i: int) -> bool:
        if i == n:
            return True
        for vec in candidates[i]:
            if all(second.dot(vec, chosen[j]) == first.gram[i][j] for j in range(i)):
                chosen.append(vec)
                if extend(i + 1):
                    return True
                chosen.pop()
        return False

    return extend(0)
