"""
Exact arithmetic helpers: rationals, Smith normal form, kernels over ℚ and 𝔽_p,
and the coset short-vector engine used by lattice and enumeration.

Everything here works on plain Python ints and ``fractions.Fraction``; numpy is
only used for the prime-field elimination where entries stay bounded.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor, gcd, isqrt
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
import sympy

logger = logging.getLogger(__name__)

Matrix = List[List[int]]
RationalVector = Tuple[Fraction, ...]


# ----------------------------------------------------------------------
# Rationals
# ----------------------------------------------------------------------

def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions, sympy Rationals and 'p/q' strings."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    raise TypeError(f"Cannot convert {value!r} to an exact rational")


def format_rational(value: Fraction):
    """JSON form of a rational: int when integral, otherwise 'p/q'."""
    value = as_fraction(value)
    if value.denominator == 1:
        return value.numerator
    return f"{value.numerator}/{value.denominator}"


def mod2(value: Fraction) -> Fraction:
    """Reduce into [0, 2)."""
    value = as_fraction(value)
    return value - 2 * (value // 2)


def mod1(value: Fraction) -> Fraction:
    """Reduce into [0, 1)."""
    value = as_fraction(value)
    return value - (value // 1)


def common_denominator(values: Sequence[Fraction]) -> int:
    den = 1
    for v in values:
        d = as_fraction(v).denominator
        den = den * d // gcd(den, d)
    return den


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(matrix: Sequence[Sequence]) -> list:
    return [list(col) for col in zip(*matrix)] if matrix else []


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def bilinear(gram: Sequence[Sequence], u: Sequence, v: Sequence):
    """u·gram·v for exact entries."""
    total = 0
    for i, ui in enumerate(u):
        if ui:
            row = gram[i]
            total += ui * sum(row[j] * vj for j, vj in enumerate(v) if vj)
    return total


# ----------------------------------------------------------------------
# Determinants, definiteness, inverse
# ----------------------------------------------------------------------

def leading_minors(matrix: Sequence[Sequence]) -> List[Fraction]:
    """Leading principal minors by fraction-exact elimination."""
    a = [[as_fraction(x) for x in row] for row in matrix]
    n = len(a)
    minors = []
    det = Fraction(1)
    for k in range(n):
        pivot = a[k][k]
        if pivot == 0:
            # k-th minor vanishes; later minors are computed directly
            minors.append(Fraction(0))
            minors.extend(determinant([row[: m + 1] for row in matrix[: m + 1]])
                          for m in range(k + 1, n))
            return minors
        det *= pivot
        minors.append(det)
        for i in range(k + 1, n):
            factor = a[i][k] / pivot
            if factor:
                for j in range(k, n):
                    a[i][j] -= factor * a[k][j]
    return minors


def determinant(matrix: Sequence[Sequence]) -> Fraction:
    """Exact determinant by Gaussian elimination with row swaps."""
    a = [[as_fraction(x) for x in row] for row in matrix]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        pivot_row = next((i for i in range(k, n) if a[i][k] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != k:
            a[k], a[pivot_row] = a[pivot_row], a[k]
            det = -det
        pivot = a[k][k]
        det *= pivot
        for i in range(k + 1, n):
            factor = a[i][k] / pivot
            if factor:
                for j in range(k, n):
                    a[i][j] -= factor * a[k][j]
    return det


def rational_inverse(matrix: Sequence[Sequence]) -> List[List[Fraction]]:
    inv = sympy.Matrix(matrix).inv()
    return [[as_fraction(inv[i, j]) for j in range(inv.cols)] for i in range(inv.rows)]


def rational_rank(matrix: Sequence[Sequence]) -> int:
    if not matrix:
        return 0
    return int(sympy.Matrix(matrix).rank())


def rational_nullspace(matrix: Sequence[Sequence], ncols: Optional[int] = None) -> List[RationalVector]:
    """Basis of {x : matrix·x = 0} over ℚ, in reduced-echelon form."""
    if not matrix:
        n = ncols or 0
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    basis = sympy.Matrix(matrix).nullspace()
    rows = [[as_fraction(v[i]) for i in range(v.rows)] for v in basis]
    return rref_rational(rows)


def rref_rational(rows: Sequence[Sequence]) -> List[RationalVector]:
    """Nonzero rows of the reduced row echelon form; a canonical span description."""
    if not rows:
        return []
    reduced, _ = sympy.Matrix(rows).rref()
    out = []
    for i in range(reduced.rows):
        row = tuple(as_fraction(reduced[i, j]) for j in range(reduced.cols))
        if any(row):
            out.append(row)
    return out


def in_row_space(vector: Sequence, rows: Sequence[Sequence]) -> bool:
    """Rational row-space membership."""
    if not rows:
        return not any(vector)
    return rational_rank(list(rows) + [list(vector)]) == rational_rank(rows)


# ----------------------------------------------------------------------
# Smith normal form
# ----------------------------------------------------------------------

@dataclass
class SnfResult:
    """left · M · right = diag, with unimodular transforms."""
    diag: List[int]
    rank: int
    left: Matrix
    right: Matrix
    shape: Tuple[int, int] = (0, 0)
    source: Matrix = field(default_factory=list)

    @property
    def invariant_factors(self) -> List[int]:
        return [d for d in self.diag if d]

    def diagonal_matrix(self) -> Matrix:
        m, n = self.shape
        return [[self.diag[i] if i == j and i < len(self.diag) else 0 for j in range(n)]
                for i in range(m)]

    def verify(self) -> bool:
        if not self.source:
            return True
        return mat_mul(mat_mul(self.left, self.source), self.right) == self.diagonal_matrix()

    def to_dict(self) -> dict:
        return {
            'diag': list(self.diag),
            'rank': self.rank,
            'left': [list(r) for r in self.left],
            'right': [list(r) for r in self.right],
            'matrix': [list(r) for r in self.source],
        }


def _swap_rows(a: Matrix, left: Matrix, i: int, j: int):
    if i != j:
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]


def _swap_cols(a: Matrix, right: Matrix, i: int, j: int):
    if i != j:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]


def _add_row(a: Matrix, left: Matrix, target: int, source: int, factor: int):
    """row_target += factor · row_source"""
    a[target] = [x + factor * y for x, y in zip(a[target], a[source])]
    left[target] = [x + factor * y for x, y in zip(left[target], left[source])]


def _add_col(a: Matrix, right: Matrix, target: int, source: int, factor: int):
    """col_target += factor · col_source"""
    for row in a:
        row[target] += factor * row[source]
    for row in right:
        row[target] += factor * row[source]


def _smallest_in_block(a: Matrix, t: int) -> Optional[Tuple[int, int]]:
    best = None
    for i in range(t, len(a)):
        for j in range(t, len(a[0])):
            if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                best = (i, j)
    return best


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> SnfResult:
    """
    Smith normal form by row/column reduction with smallest-pivot control.

    Returns transforms as exact witnesses. Sizes here are at most ~20×12, so
    plain integer arithmetic is fine.
    """
    source = [[int(x) for x in row] for row in matrix]
    m = len(source)
    n = len(source[0]) if m else 0
    a = [row[:] for row in source]
    left = identity(m)
    right = identity(n)

    t = 0
    while t < min(m, n):
        pivot = _smallest_in_block(a, t)
        if pivot is None:
            break
        _swap_rows(a, left, t, pivot[0])
        _swap_cols(a, right, t, pivot[1])

        while True:
            clean = True
            for i in range(t + 1, m):
                if a[i][t]:
                    _add_row(a, left, i, t, -(a[i][t] // a[t][t]))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, n):
                if a[t][j]:
                    _add_col(a, right, j, t, -(a[t][j] // a[t][t]))
                    clean = clean and a[t][j] == 0
            if not clean:
                # a remainder smaller than the pivot survived; promote it
                candidates = [(abs(a[i][t]), i, t) for i in range(t + 1, m) if a[i][t]]
                candidates += [(abs(a[t][j]), t, j) for j in range(t + 1, n) if a[t][j]]
                _, i, j = min(candidates)
                _swap_rows(a, left, t, i)
                _swap_cols(a, right, t, j)
                continue
            offender = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % a[t][t]),
                None,
            )
            if offender is None:
                break
            _add_row(a, left, t, offender[0], 1)

        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]
        t += 1

    diag = [a[i][i] for i in range(min(m, n))]
    rank = sum(1 for d in diag if d)
    return SnfResult(diag=diag, rank=rank, left=left, right=right, shape=(m, n), source=source)


def integer_kernel(matrix: Sequence[Sequence[int]], ncols: Optional[int] = None) -> List[Tuple[int, ...]]:
    """Basis of the saturated integer kernel {y ∈ ℤⁿ : matrix·y = 0}."""
    if not matrix:
        n = ncols or 0
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    snf = smith_normal_form(matrix)
    n = snf.shape[1]
    return [tuple(snf.right[i][j] for i in range(n)) for j in range(snf.rank, n)]


# ----------------------------------------------------------------------
# Prime fields
# ----------------------------------------------------------------------

def rref_mod_p(matrix: Sequence[Sequence[int]], p: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form over 𝔽_p and its pivot columns."""
    a = np.array(matrix, dtype=np.int64) % p
    if a.ndim == 1:
        a = a.reshape(1, -1)
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k], :] = a[[k, r], :]
        inv = pow(int(a[r, c]), -1, p)
        a[r, :] = (a[r, :] * inv) % p
        for i in range(rows):
            if i != r and a[i, c]:
                a[i, :] = (a[i, :] - a[i, c] * a[r, :]) % p
        pivots.append(c)
        r += 1
    return a[:r, :], pivots


def nullspace_mod_p(matrix: Sequence[Sequence[int]], p: int, ncols: Optional[int] = None) -> List[Tuple[int, ...]]:
    """Kernel basis over 𝔽_p, returned in reduced-echelon form."""
    if not matrix:
        n = ncols or 0
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    reduced, pivots = rref_mod_p(matrix, p)
    n = reduced.shape[1]
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        vec = [0] * n
        vec[f] = 1
        for row, pc in zip(reduced, pivots):
            vec[pc] = int(-row[f]) % p
        basis.append(vec)
    if not basis:
        return []
    reduced_basis, _ = rref_mod_p(basis, p)
    return [tuple(int(x) for x in row) for row in reduced_basis]


def span_equal_mod_p(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], p: int) -> bool:
    ra = rref_mod_p(a, p)[0] if a else np.zeros((0, 0), dtype=np.int64)
    rb = rref_mod_p(b, p)[0] if b else np.zeros((0, 0), dtype=np.int64)
    return ra.shape == rb.shape and bool(np.array_equal(ra, rb))


# ----------------------------------------------------------------------
# Coset short vectors (Fincke–Pohst on a shifted lattice)
# ----------------------------------------------------------------------

def ldl_decomposition(form: Sequence[Sequence]) -> Tuple[List[Fraction], List[List[Fraction]]]:
    """
    Q(x) = Σ_i d_i (x_i + Σ_{j>i} mu[i][j] x_j)² for a positive definite form.
    """
    n = len(form)
    a = [[as_fraction(x) for x in row] for row in form]
    d = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = a[i][i]
        if d[i] <= 0:
            raise ValueError("Form is not positive definite")
        for j in range(i + 1, n):
            mu[i][j] = a[i][j] / d[i]
        for j in range(i + 1, n):
            for k in range(j, n):
                a[j][k] -= mu[i][j] * a[i][k]
                a[k][j] = a[j][k]
    return d, mu


def _floor_sqrt_fraction(x: Fraction) -> int:
    """⌊√x⌋ for x ≥ 0."""
    if x <= 0:
        return 0
    return isqrt(x.numerator * x.denominator) // x.denominator


def coset_vectors(
    form: Sequence[Sequence],
    offset: Sequence[Fraction],
    bound: Fraction,
    exact: bool = False,
) -> Iterator[Tuple[Tuple[Fraction, ...], Fraction]]:
    """
    Yield (x, Q(x)) for every x ∈ offset + ℤⁿ with Q(x) ≤ bound
    (Q(x) == bound when ``exact``), Q positive definite.

    Depth-first from the last coordinate; the shift is folded into the integer
    interval at each level and candidates are re-checked exactly, so the float
    free ⌊√⌋ estimate only has to be close.
    """
    n = len(form)
    bound = as_fraction(bound)
    if n == 0:
        if bound >= 0 and (not exact or bound == 0):
            yield (), Fraction(0)
        return
    d, mu = ldl_decomposition(form)
    c = [as_fraction(v) for v in offset]
    x: List[Fraction] = [Fraction(0)] * n

    def walk(i: int, remaining: Fraction, partial: Fraction):
        shift = sum((mu[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        center = -(c[i] + shift)
        radius = _floor_sqrt_fraction(remaining / d[i]) + 1
        lo = floor(center - radius)
        hi = ceil(center + radius)
        for z in range(lo, hi + 1):
            xi = c[i] + z
            t = xi + shift
            spent = d[i] * t * t
            if spent > remaining:
                continue
            x[i] = xi
            if i == 0:
                total = partial + spent
                if not exact or total == bound:
                    yield tuple(x), total
            else:
                yield from walk(i - 1, remaining - spent, partial + spent)
        x[i] = Fraction(0)

    yield from walk(n - 1, bound, Fraction(0))
