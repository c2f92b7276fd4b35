#!/usr/bin/env python3
"""
Singularity catalog
Exceptional divisors of elliptic singularities read as singular elliptic fibers,
plus the corank-3 T-series points and the two irrational special points.

Labels are ASCII: 'J2,0', 'J3,s', 'E12', 'X1,s', 'Z1,s' (Z^1_{1,s}), 'Z11',
'Yr,s' (Y^1_{r,s}), 'W1,s', 'W#1,s', 'W12', 'P8', 'T3,4,4', 'X2,0', 'J4,0'.
Aliases: X9 = X1,0, J10 = J2,0, P8 = T3,3,3, P9 = T3,3,4.
"""

import logging
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

logger = logging.getLogger(__name__)

SERIES_CONSTANT = {'T': 8, 'X': 9, 'J': 10}
KAPPA_SQ = {'T': -3, 'X': -2, 'J': -1}

_FIXED_CHI = {'II': 2, 'III': 3, 'IV': 4, 'IV*': 8, 'III*': 9, 'II*': 10}
_FIXED_COMPONENTS = {'II': 1, 'III': 2, 'IV': 3, 'IV*': 7, 'III*': 8, 'II*': 9}
_KODAIRA = re.compile(r'^I_?(?P<s>\d+)(?P<star>\*)?$')


class UnknownSingularityError(KeyError):
    """Raised for labels or fiber symbols missing from the catalog."""


@dataclass(frozen=True)
class ComponentDescription:
    """An exceptional divisor given by its curves and intersection points."""
    components: Tuple[Tuple[str, int, int], ...]  # (name, genus, self-intersection)
    intersections: Tuple[Tuple[str, str, int], ...] = ()

    @property
    def chi(self) -> int:
        # inclusion-exclusion over transversal intersection points
        return (sum(2 - 2 * genus for _, genus, _ in self.components)
                - sum(count for _, _, count in self.intersections))

    def __str__(self) -> str:
        curves = ' + '.join(f"{name}(g={g}, {sq})" for name, g, sq in self.components)
        return curves + ''.join(f"; {a}.{b}={k}" for a, b, k in self.intersections)


Fiber = Union[str, ComponentDescription]


def _kodaira(symbol: str) -> Tuple[int, int]:
    """(chi, number of components) of a Kodaira symbol."""
    symbol = symbol.strip().replace('^*', '*')
    if symbol in _FIXED_CHI:
        return _FIXED_CHI[symbol], _FIXED_COMPONENTS[symbol]
    match = _KODAIRA.match(symbol)
    if not match:
        raise UnknownSingularityError(f"Unknown fiber type: {symbol}")
    s = int(match.group('s'))
    if match.group('star'):
        return s + 6, s + 5
    return s, max(s, 1)


def chi_of_fiber(fiber: Fiber) -> int:
    """Topological Euler characteristic of a fiber type or explicit divisor."""
    if isinstance(fiber, ComponentDescription):
        return fiber.chi
    return _kodaira(fiber)[0]


def components_of_fiber(fiber: Fiber) -> int:
    if isinstance(fiber, ComponentDescription):
        return len(fiber.components)
    return _kodaira(fiber)[1]


@dataclass(frozen=True)
class SingularityRecord:
    label: str
    milnor: int
    fiber: Fiber
    kappa_sq: int
    series: str
    dynkin: str = ''
    note: str = ''

    @property
    def chi(self) -> int:
        return chi_of_fiber(self.fiber)

    @property
    def components(self) -> int:
        return components_of_fiber(self.fiber)

    @property
    def defect(self) -> int:
        """μ − χ, constant within a series."""
        return self.milnor - self.chi

    def to_dict(self) -> dict:
        return {
            'label': self.label,
            'milnor': self.milnor,
            'fiber': str(self.fiber),
            'kappa_sq': self.kappa_sq,
            'chi': self.chi,
            'series': self.series,
            'dynkin': self.dynkin,
            'note': self.note,
        }


_J4 = ComponentDescription(
    components=(('E', 1, -1), ('R1', 0, -2)),
    intersections=(('E', 'R1', 1),),
)
_X20 = ComponentDescription(
    components=(('E', 1, -2), ('R1', 0, -2), ('R2', 0, -2)),
    intersections=(('E', 'R1', 1), ('E', 'R2', 1)),
)

# label -> (milnor, fiber, dynkin, series)
_FIXED: Dict[str, Tuple[int, Fiber, str, str]] = {
    'J2,0': (10, 'I0', '~A0', 'J'),
    'J2,1': (11, 'I1', '~A0*', 'J'),
    'E12': (12, 'II', '~A0**', 'J'),
    'E13': (13, 'III', '~A1*', 'J'),
    'E14': (14, 'IV', '~A2*', 'J'),
    'E18': (18, 'IV*', '~E6', 'J'),
    'E19': (19, 'III*', '~E7', 'J'),
    'E20': (20, 'II*', '~E8', 'J'),
    'X1,0': (9, 'I0', '~A0', 'X'),
    'X1,1': (10, 'I1', '~A0*', 'X'),
    'Z11': (11, 'II', '~A0**', 'X'),
    'Z12': (12, 'III', '~A1*', 'X'),
    'Z13': (13, 'IV', '~A2*', 'X'),
    'Z17': (17, 'IV*', '~E6', 'X'),
    'Z18': (18, 'III*', '~E7', 'X'),
    'Z19': (19, 'II*', '~E8', 'X'),
    'W12': (12, 'III', '~A1*', 'X'),
    'W13': (13, 'IV', '~A2*', 'X'),
    'W17': (17, 'IV*', '~E6', 'X'),
    'W18': (18, 'III*', '~E7', 'X'),
    # corank 3: the plane cubic E0 and its degenerations
    'P8': (8, 'I0', '~A0', 'T'),
    'P9': (9, 'I1', '~A0*', 'T'),
    'Q10': (10, 'II', '~A0**', 'T'),
    'T3,4,4': (10, 'I2', '~A1', 'T'),
    'S11': (11, 'III', '~A1*', 'T'),
    'T4,4,4': (11, 'I3', '~A2', 'T'),
    'U12': (12, 'IV', '~A2*', 'T'),
    'X2,0': (21, _X20, 'E+R1+R2', 'special'),
    'J4,0': (22, _J4, 'E+R1', 'special'),
}

_NOTES = {
    'X2,0': "μ inferred from μ − χ = 19 and the three-curve divisor",
    'J4,0': "μ − χ = 21 with the two-curve divisor",
}

_SPECIAL_KAPPA = {'X2,0': -4, 'J4,0': -2}

_ALIASES = {
    'X9': 'X1,0',
    'J10': 'J2,0',
    'T3,3,3': 'P8',
    'T3,3,4': 'P9',
}

# parametric rows: (pattern, smallest s, builder) with builder(s) -> (milnor, fiber, dynkin, series)
_PARAMETRIC = [
    (re.compile(r'^J2,(?P<s>\d+)$'), 2,
     lambda s: (10 + s, f'I{s}', f'~A{s - 1}', 'J')),
    (re.compile(r'^J3,(?P<s>\d+)$'), 0,
     lambda s: (16 + s, f'I{s}*', f'~D{s + 4}', 'J')),
    (re.compile(r'^X1,(?P<s>\d+)$'), 2,
     lambda s: (9 + s, f'I{s}', f'~A{s - 1}', 'X')),
    (re.compile(r'^Z1,(?P<s>\d+)$'), 0,
     lambda s: (15 + s, f'I{s}*', f'~D{s + 4}', 'X')),
    (re.compile(r'^W1,(?P<s>\d+)$'), 0,
     lambda s: (15 + s, f'I{s}*', f'~D{s + 4}', 'X')),
    (re.compile(r'^W#1,(?P<s>\d+)$'), 0,
     lambda s: (15 + s, f'I{s}*', f'~D{s + 4}', 'X')),
]
_Y = re.compile(r'^Y(?P<r>\d+),(?P<s>\d+)$')


def normalize_label(label: str) -> str:
    """'J_{2,0}' -> 'J2,0', 'Z^1_{11}' -> 'Z11', 'W^#_{1,3}' -> 'W#1,3'."""
    out = label.strip().replace('♯', '#').replace('^1', '').replace('^#', '#')
    out = re.sub(r'[\s_{}]', '', out)
    return _ALIASES.get(out, out)


def lookup(label: str) -> SingularityRecord:
    """Resolve a label, instantiating parametric rows."""
    key = normalize_label(label)
    if key in _FIXED:
        milnor, fiber, dynkin, series = _FIXED[key]
    else:
        built = None
        for pattern, min_s, builder in _PARAMETRIC:
            match = pattern.match(key)
            if match and int(match.group('s')) >= min_s:
                built = builder(int(match.group('s')))
                break
        if built is None:
            y = _Y.match(key)
            if y and int(y.group('r')) >= 1 and int(y.group('s')) >= 1:
                r, s = int(y.group('r')), int(y.group('s'))
                built = (9 + r + s, f'I{r + s}', f'~A{r + s - 1}', 'X')
        if built is None:
            raise UnknownSingularityError(f"Unknown singularity: {label}")
        milnor, fiber, dynkin, series = built
    kappa = _SPECIAL_KAPPA.get(key, KAPPA_SQ.get(series, 0))
    return SingularityRecord(
        label=key,
        milnor=milnor,
        fiber=fiber,
        kappa_sq=kappa,
        series=series,
        dynkin=dynkin,
        note=_NOTES.get(key, ''),
    )


def catalog_rows(sample: Sequence[int] = (2, 3)) -> List[SingularityRecord]:
    """Every fixed row plus the parametric rows instantiated at ``sample``."""
    labels = list(_FIXED)
    for s in sample:
        labels += [f'J2,{s}', f'J3,{s}', f'X1,{s}', f'Z1,{s}', f'W1,{s}', f'W#1,{s}']
        labels += [f'Y{r},{s}' for r in (1, s)]
    labels += ['J3,0', 'Z1,0', 'W1,0', 'W#1,0']
    return [lookup(label) for label in dict.fromkeys(labels)]


def constancy_violations(rows: Optional[Sequence[SingularityRecord]] = None) -> List[str]:
    """Rows whose μ − χ differs from their series constant."""
    rows = catalog_rows() if rows is None else rows
    issues = []
    for row in rows:
        expected = SERIES_CONSTANT.get(row.series)
        if expected is None:
            continue
        if row.defect != expected:
            issues.append(f"{row.label}: μ − χ = {row.defect}, expected {expected}")
    return issues


def betti(q_irregularity: int, nonsimple: Sequence[Union[str, SingularityRecord]]) -> int:
    """b2 of the minimal resolution: 22 + 4q + Σ(χ − μ − 1)."""
    total = 22 + 4 * q_irregularity
    for item in nonsimple:
        record = item if isinstance(item, SingularityRecord) else lookup(item)
        total += record.chi - record.milnor - 1
    return total
