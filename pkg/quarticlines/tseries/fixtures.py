#!/usr/bin/env python3
"""
Built-in T-series incidence fixtures.

Rows are the twelve (−1)-lines (the index set I = {1..12}), columns the
(−2)-lines; a column is the 3-subset of points it passes through. V16 and
V17 are the first 16 and 17 columns of V19.
"""

import logging
import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)

N_POINTS = 12
BLOCKS = ((0, 1, 2, 3), (4, 5, 6, 7), (8, 9, 10, 11))

_V19 = """
. . . . . . 1 1 1 . . . . . . 1 . . .
1 . . 1 . . . . . . 1 . 1 . . . 1 . .
. 1 . . 1 . . . . . . 1 . 1 . . 1 . .
. . 1 . . 1 . . . 1 . . . . 1 . 1 . .
. . . . . . . . . 1 1 1 . . . 1 . . .
1 . . . . 1 1 . . . . . . 1 . . . 1 .
. 1 . 1 . . . 1 . . . . . . 1 . . 1 .
. . 1 . 1 . . . 1 . . . 1 . . . . 1 .
. . . . . . . . . . . . 1 1 1 1 . . .
1 . . . 1 . . 1 . 1 . . . . . . . . 1
. 1 . . . 1 . . 1 . 1 . . . . . . . 1
. . 1 1 . . 1 . . . . 1 . . . . . . 1
"""

_U_PRIME_16 = """
1 . . . 1 . . . . . . 1 . 1 . .
. 1 . . . 1 . . . . . . 1 . 1 .
. . 1 . . . 1 . . . . . . 1 . 1
. . . 1 1 . . 1 . . . . . . 1 .
1 . . . . 1 . . 1 . . . . . . 1
. 1 . . 1 . 1 . . 1 . . . . . .
. . 1 . . 1 . 1 . . 1 . . . . .
. . . 1 . . 1 . 1 . . 1 . . . .
1 . . . . . . 1 . 1 . . 1 . . .
. 1 . . . . . . 1 . 1 . . 1 . .
. . 1 . . . . . . 1 . 1 . . 1 .
. . . 1 . . . . . . 1 . 1 . . 1
"""

_U_DOUBLE_PRIME_16 = """
1 1 . . 1 . . 1 . . . . . . . .
1 . . 1 . 1 . . . . . . . . . 1
1 . 1 . . . . . . 1 1 . . 1 . .
. 1 . . . 1 . . . 1 . . . . . .
. 1 . . . . 1 . 1 . 1 . . . . .
. . 1 . 1 . . . . . . . . . . 1
. . . . . 1 . . 1 . . . . 1 1 .
. . . 1 . . 1 . . . . 1 . 1 . .
. . . . . . . 1 . 1 . 1 . . 1 1
. . 1 . . . . . 1 . . 1 1 . . .
. . . 1 . . . 1 . . 1 . 1 . . .
. . . . 1 . 1 . . . . . 1 . 1 .
"""


@dataclass(frozen=True)
class IncidenceMatrix:
    """Points × lines 0/1 matrix; each column is a collinear triple."""
    name: str
    rows: Tuple[Tuple[int, ...], ...]

    @property
    def n_points(self) -> int:
        return len(self.rows)

    @property
    def n_lines(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def columns(self) -> List[FrozenSet[int]]:
        return [
            frozenset(i for i in range(self.n_points) if self.rows[i][j])
            for j in range(self.n_lines)
        ]

    def violations(self) -> List[str]:
        issues = []
        cols = self.columns
        for j, col in enumerate(cols):
            if len(col) != 3:
                issues.append(f"{self.name}: column {j + 1} has {len(col)} ones")
        for a, b in combinations(range(len(cols)), 2):
            if len(cols[a] & cols[b]) > 1:
                issues.append(f"{self.name}: columns {a + 1} and {b + 1} share "
                              f"{len(cols[a] & cols[b])} points")
        return issues

    def transposed(self) -> List[List[int]]:
        """The collinearity matrix: one row p_i + p_j + p_k per column."""
        return [[self.rows[i][j] for i in range(self.n_points)] for j in range(self.n_lines)]

    def head(self, count: int, name: Optional[str] = None) -> 'IncidenceMatrix':
        return IncidenceMatrix(name or f"{self.name}[:{count}]",
                               tuple(row[:count] for row in self.rows))

    @classmethod
    def from_columns(cls, name: str, columns: Sequence[Sequence[int]],
                     n_points: int = N_POINTS) -> 'IncidenceMatrix':
        sets = [set(c) for c in columns]
        rows = tuple(tuple(int(i in s) for s in sets) for i in range(n_points))
        return cls(name, rows)

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'columns': [sorted(i + 1 for i in col) for col in self.columns],
        }


def _parse(name: str, text: str) -> IncidenceMatrix:
    rows = []
    for line in text.strip().splitlines():
        rows.append(tuple(1 if token == '1' else 0 for token in line.split()))
    widths = {len(r) for r in rows}
    if len(rows) != N_POINTS or len(widths) != 1:
        raise ValueError(f"Malformed fixture {name}: {len(rows)} rows, widths {sorted(widths)}")
    return IncidenceMatrix(name, tuple(rows))


def _build() -> Dict[str, IncidenceMatrix]:
    v19 = _parse('V19', _V19)
    return {
        'V16': v19.head(16, 'V16'),
        'V17': v19.head(17, 'V17'),
        'V19': v19,
        'Uprime16': _parse('Uprime16', _U_PRIME_16),
        'Udoubleprime16': _parse('Udoubleprime16', _U_DOUBLE_PRIME_16),
    }


FIXTURES = _build()
FIXTURE_NAMES = tuple(FIXTURES)
_ALIASES = {"U'16": 'Uprime16', "U''16": 'Udoubleprime16', 'U′16': 'Uprime16',
            'U″16': 'Udoubleprime16'}


def builtin_config(name: str) -> IncidenceMatrix:
    key = _ALIASES.get(name.strip(), name.strip())
    if key not in FIXTURES:
        raise ValueError(f"Unknown configuration: {name} (known: {', '.join(FIXTURE_NAMES)})")
    return FIXTURES[key]


def load_config(source: str) -> IncidenceMatrix:
    """A built-in name, or a file of twelve whitespace-separated 0/1 rows."""
    if not os.path.isfile(source):
        return builtin_config(source)
    with open(source) as f:
        matrix = _parse(os.path.splitext(os.path.basename(source))[0], f.read())
    issues = matrix.violations()
    if issues:
        raise ValueError('; '.join(issues))
    return matrix


def block_indicator(n: int) -> Tuple[int, ...]:
    """c_n: the indicator of the n-th block of four points."""
    return tuple(int(i in BLOCKS[n]) for i in range(N_POINTS))


def block_difference(a: int, b: int) -> Tuple[int, ...]:
    return tuple(x - y for x, y in zip(block_indicator(a), block_indicator(b)))


U_VECTOR = block_difference(1, 2)
V_VECTOR = block_difference(0, 1)


# ----------------------------------------------------------------------
# The subset model inside A11 ⊂ H12
# ----------------------------------------------------------------------

def _frame_to_a11(x: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    # A11 basis e_k − e_{k+1}: coordinates are prefix sums of a zero-sum vector
    out, total = [], Fraction(0)
    for value in x[:-1]:
        total += value
        out.append(total)
    return tuple(out)


def subset_coords(points: FrozenSet[int]) -> Tuple[Fraction, ...]:
    """A11 coordinates of the (−2)-line through ``points``: ω/4 − 1_s."""
    x = [Fraction(1, 4) - (1 if i in points else 0) for i in range(N_POINTS)]
    return _frame_to_a11(x)


def point_coords(point: int) -> Tuple[Fraction, ...]:
    """A11 coordinates of the (−1)-line of a point: e_i − ω/12."""
    x = [(1 if i == point else 0) - Fraction(1, 12) for i in range(N_POINTS)]
    return _frame_to_a11(x)
