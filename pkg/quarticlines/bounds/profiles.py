#!/usr/bin/env python3
"""
Series profiles
Per-family data: the reduced lattice Σ, the classes η and λ, the canonical
class square and the line counts through the non-simple point.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from ..core.enumeration import DualVector, vec_plus, vec_std
from ..core.lattice import (
    DiscClass,
    Lattice,
    component_square,
    find_class,
    pairs_with,
    parse_lattice,
)
from .catalog import betti, lookup

logger = logging.getLogger(__name__)

ETA_LAMBDA = Fraction(-1, 4)


@dataclass(frozen=True)
class PaperRow:
    """Printed table values, kept as strings so '?' and '2 or 3' survive."""
    max_lines: str = ''
    m_bound: str = ''
    b2: str = ''
    elkies: str = ''
    sigma: str = ''
    bound: str = ''


@dataclass(frozen=True)
class SeriesProfile:
    series: str
    title: str
    sigma_spec: str
    k_sq: int
    k_line_max: int
    nonsimple: Tuple[str, ...] = ()
    q_irregularity: int = 0
    b2_fixed: Optional[int] = None
    q0: Fraction = Fraction(-9, 4)
    q1_fixed: Optional[Fraction] = None
    eta_lambda: Optional[Fraction] = ETA_LAMBDA
    eta_meet: Fraction = Fraction(3, 4)
    has_eta: bool = True
    emax_uses_lambda: bool = False  # off when the (−1)-lines present trade off against Ē
    max_exceptional: Optional[int] = None
    ell_cross: bool = False
    strategy: str = 'exhaustive-maximal'
    min_size: int = 1
    candidates: Tuple[str, ...] = ()
    paper: PaperRow = field(default_factory=PaperRow)

    @property
    def irrational(self) -> bool:
        return self.q_irregularity > 0

    @property
    def kappa(self) -> Optional[Fraction]:
        return Fraction(1, self.k_sq) if self.k_sq else None

    @property
    def q1(self) -> Optional[Fraction]:
        if self.q1_fixed is not None:
            return self.q1_fixed
        if self.kappa is None:
            return None
        return -self.kappa - Fraction(5, 4)

    @property
    def b2_rational(self) -> int:
        if self.b2_fixed is not None:
            return self.b2_fixed
        return betti(self.q_irregularity, self.nonsimple)

    @property
    def exceptional_components(self) -> int:
        return sum(lookup(label).components for label in self.nonsimple)

    def sigma(self) -> Lattice:
        return _parse(self.sigma_spec)

    def lambda_class(self) -> Optional[DiscClass]:
        return _classes(self)[1]

    def eta_class(self) -> Optional[DiscClass]:
        return _classes(self)[0]

    def lambda_vectors(self) -> List[DualVector]:
        lam = self.lambda_class()
        return vec_std(self.sigma(), lam) if lam is not None else []

    def eta_vectors(self) -> List[DualVector]:
        eta = self.eta_class()
        return vec_plus(self.sigma(), eta) if eta is not None else []

    def to_dict(self) -> dict:
        return {
            'series': self.series,
            'title': self.title,
            'sigma': self.sigma_spec,
            'k_sq': self.k_sq,
            'q0': str(self.q0),
            'q1': str(self.q1) if self.q1 is not None else None,
            'k_line_max': self.k_line_max,
            'b2': self.b2_rational,
        }


@lru_cache(maxsize=None)
def _parse(spec: str) -> Lattice:
    return parse_lattice(spec)


_CLASS_CACHE: Dict[str, Tuple[Optional[DiscClass], Optional[DiscClass]]] = {}


def profile_classes(profile: SeriesProfile, sigma: Optional[Lattice] = None
                    ) -> Tuple[Optional[DiscClass], Optional[DiscClass]]:
    """(η, λ) of a series in Σ or in one of its candidate lattices."""
    sigma = profile.sigma() if sigma is None else sigma
    lam = find_class(sigma, profile.q1) if profile.k_line_max and profile.q1 is not None else None
    eta = None
    if profile.has_eta:
        if profile.eta_lambda is not None and lam is not None:
            selector = pairs_with(sigma, lam, profile.eta_lambda)
        else:
            selector = lambda cls: not cls.is_zero  # noqa: E731
        eta = find_class(sigma, profile.q0, selector)
        if eta is None:
            logger.warning(f"{profile.title}: no η class in {sigma.name}")
    return eta, lam


def _classes(profile: SeriesProfile) -> Tuple[Optional[DiscClass], Optional[DiscClass]]:
    if profile.series not in _CLASS_CACHE:
        _CLASS_CACHE[profile.series] = profile_classes(profile)
    return _CLASS_CACHE[profile.series]


PROFILES: Dict[str, SeriesProfile] = {
    'T': SeriesProfile(
        series='T', title='T', sigma_spec='A11', k_sq=-3, k_line_max=12,
        nonsimple=('P8',), max_exceptional=1, strategy='size-at-least', min_size=16,
        candidates=('A11', 'E8+A2+D1', 'D9+A2'),
        paper=PaperRow('31', '31', '13', '34', 'A11', '20↦32'),
    ),
    'X': SeriesProfile(
        series='X', title='X', sigma_spec='E7+A3', k_sq=-2, k_line_max=4,
        nonsimple=('X1,0',), emax_uses_lambda=True,
        candidates=('E7+A3', 'E8+A1+D1', 'D9+A1'),
        paper=PaperRow('20', '20', '12', '22', 'E7⊕A3', '16↦20'),
    ),
    'Jstar': SeriesProfile(
        series='Jstar', title='J*', sigma_spec='E8+D1', k_sq=-1, k_line_max=1,
        nonsimple=('J2,0',), emax_uses_lambda=True, ell_cross=True,
        strategy='size-at-least', min_size=10,
        candidates=('E8+D1', 'D9'),
        paper=PaperRow('12', '27', '11', '14', 'E8⊕D1', '13↦14'),
    ),
    'J': SeriesProfile(
        series='J', title='J', sigma_spec='D9', k_sq=-1, k_line_max=0,
        nonsimple=('J2,0',), eta_lambda=None,
        candidates=('E8+D1', 'D9'),
        paper=PaperRow('?', '48', '11', '16', 'D9', '16↦16'),
    ),
    'L': SeriesProfile(
        series='L', title='L', sigma_spec='D8', k_sq=0, k_line_max=16,
        b2_fixed=10, q0=Fraction(-2), q1_fixed=Fraction(-1), eta_lambda=None,
        eta_meet=Fraction(1, 2),
        paper=PaperRow('', '', '10', '28', 'D8', '10↦26'),
    ),
    'X2,0': SeriesProfile(
        series='X2,0', title='X2,0+Δ', sigma_spec='D4', k_sq=-4, k_line_max=4,
        nonsimple=('X2,0',), q_irregularity=1, q1_fixed=Fraction(-1), has_eta=False,
        paper=PaperRow('4-μ(Δ)', '', '6', '6', 'D4', '0↦4'),
    ),
    '2X9': SeriesProfile(
        series='2X9', title='2X9+Δ', sigma_spec='D4', k_sq=-4, k_line_max=8,
        nonsimple=('X9', 'X9'), q_irregularity=1, q1_fixed=Fraction(-1), has_eta=False,
        paper=PaperRow('8-2μ(Δ)', '', '6', '11', 'D4', '0↦8'),
    ),
    'J4,0': SeriesProfile(
        series='J4,0', title='J4,0', sigma_spec='A1+D1', k_sq=-2, k_line_max=1,
        nonsimple=('J4,0',), q_irregularity=1,
        paper=PaperRow('1', '', '4', '2', 'A1⊕D1', '1↦2'),
    ),
    '2J10': SeriesProfile(
        series='2J10', title='2J10', sigma_spec='A1+D1', k_sq=-2, k_line_max=2,
        nonsimple=('J10', 'J10'), q_irregularity=1,
        paper=PaperRow('2 or 3', '', '4', '3', 'A1⊕D1', '1↦3'),
    ),
}

RATIONAL_SERIES = ('T', 'X', 'Jstar', 'J')
IRRATIONAL_SERIES = ('X2,0', '2X9', 'J4,0', '2J10')
_ALIASES = {'J*': 'Jstar', 'JSTAR': 'Jstar', 'X20': 'X2,0', 'J40': 'J4,0'}


def get_profile(series: str) -> SeriesProfile:
    key = series.strip()
    key = _ALIASES.get(key.upper(), _ALIASES.get(key, key))
    if key not in PROFILES:
        raise ValueError(f"Unknown series: {series} (known: {', '.join(PROFILES)})")
    return PROFILES[key]


@dataclass(frozen=True)
class SigmaCandidate:
    spec: str
    lattice: str
    lambda_count: int
    accommodates: bool
    selected: bool

    def to_dict(self) -> dict:
        return {
            'spec': self.spec,
            'lattice': self.lattice,
            'lambda_count': self.lambda_count,
            'accommodates': self.accommodates,
            'selected': self.selected,
        }


def sigma_candidates(series: str) -> List[SigmaCandidate]:
    """
    The lattices in the genus of Σ with |vec(Σ, λ)|; a candidate must hold
    k_line_max (−1)-lines.
    """
    profile = get_profile(series)
    out = []
    for spec in profile.candidates:
        lattice = _parse(spec)
        count = 0
        if profile.q1 is not None:
            lam = find_class(lattice, profile.q1)
            count = len(vec_std(lattice, lam)) if lam is not None else 0
        out.append(SigmaCandidate(
            spec=spec,
            lattice=lattice.name,
            lambda_count=count,
            accommodates=count >= profile.k_line_max,
            selected=spec == profile.sigma_spec,
        ))
    logger.info(f"{profile.title}: candidates " + ', '.join(
        f"{c.lattice}={c.lambda_count}" for c in out))
    return out


# E0 splittings met in the T- and X-series arguments: C² of each component
_SPLITS: Dict[str, Tuple[Tuple[str, Tuple[int, ...]], ...]] = {
    'T': (
        ('irreducible', ()),
        ('line+conic', (-3, -4)),
        ('three lines', (-3, -3, -3)),
    ),
    'X': (
        ('irreducible', ()),
        ('(-4)+(-2)', (-4, -2)),
    ),
}


@dataclass(frozen=True)
class ComponentSplit:
    name: str
    squares: Tuple[int, ...]
    projected: Tuple[Fraction, ...]

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'squares': list(self.squares),
            'projected': [str(x) for x in self.projected],
        }


def component_splits(series: str) -> List[ComponentSplit]:
    """Projected squares c² = C² − κ(C² + 2)² of the E0 components per splitting."""
    profile = get_profile(series)
    if profile.series not in _SPLITS:
        raise ValueError(f"No E0 splittings recorded for series {profile.series}")
    kappa = profile.kappa
    return [
        ComponentSplit(name, squares, tuple(component_square(c, kappa) for c in squares))
        for name, squares in _SPLITS[profile.series]
    ]


def profile_for_lattice(spec: str) -> Optional[SeriesProfile]:
    """The series whose Σ is ``spec``, else the first listing it as a candidate."""
    name = _parse(spec).name
    for profile in PROFILES.values():
        if profile.sigma().name == name:
            return profile
    for profile in PROFILES.values():
        if any(_parse(c).name == name for c in profile.candidates):
            return profile
    return None
