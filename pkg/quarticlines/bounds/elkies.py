#!/usr/bin/env python3
"""
Elkies' two-distance bound and its per-series assembly.

A set of unit vectors in an n-dimensional positive definite space whose
pairwise products take only the values τ1, τ2 has at most
(1 − τ1)(1 − τ2)n / (1 + τ1τ2n) elements, provided τ1 + τ2 ≤ 0 and
1 + nτ1τ2 > 0.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import List, Optional, Sequence, Tuple

from ..core.exact import as_fraction, format_rational
from .catalog import betti
from .profiles import SeriesProfile, get_profile

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ElkiesInput:
    n: int
    tau1: Fraction
    tau2: Fraction

    def __post_init__(self):
        object.__setattr__(self, 'tau1', as_fraction(self.tau1))
        object.__setattr__(self, 'tau2', as_fraction(self.tau2))

    def violations(self) -> List[str]:
        issues = []
        if self.n < 1:
            issues.append(f"n = {self.n} is not positive")
        if self.tau1 + self.tau2 > 0:
            issues.append(f"τ1 + τ2 = {self.tau1 + self.tau2} > 0")
        if 1 + self.n * self.tau1 * self.tau2 <= 0:
            issues.append(f"1 + nτ1τ2 = {1 + self.n * self.tau1 * self.tau2} ≤ 0")
        return issues


@dataclass(frozen=True)
class ElkiesResult:
    input: ElkiesInput
    value: Fraction

    @property
    def floor(self) -> int:
        return floor(self.value)

    def to_dict(self) -> dict:
        return {
            'n': self.input.n,
            'tau1': format_rational(self.input.tau1),
            'tau2': format_rational(self.input.tau2),
            'value': format_rational(self.value),
            'floor': self.floor,
        }


def elkies_bound(inp: ElkiesInput) -> ElkiesResult:
    issues = inp.violations()
    if issues:
        raise ValueError("Elkies bound does not apply: " + '; '.join(issues))
    t1, t2, n = inp.tau1, inp.tau2, inp.n
    return ElkiesResult(inp, (1 - t1) * (1 - t2) * n / (1 + t1 * t2 * n))


def normalized_taus(q0) -> Tuple[Fraction, Fraction]:
    """The two products (q0 + 2)/q0 and (q0 + 3)/q0 after rescaling l² to 1."""
    q0 = as_fraction(q0)
    return (q0 + 2) / q0, (q0 + 3) / q0


@dataclass
class SeriesElkies:
    series: str
    n: int
    lines_bound: int
    k_lines: int
    extra: int = 0
    steps: List[str] = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.lines_bound + self.extra + self.k_lines

    def to_dict(self) -> dict:
        return {
            'series': self.series,
            'n': self.n,
            'lines_bound': self.lines_bound,
            'extra': self.extra,
            'k_lines': self.k_lines,
            'total': self.total,
            'steps': list(self.steps),
        }


def projection_dimension(profile: SeriesProfile, b2: int) -> int:
    """n = b2 − 2 for rational surfaces; irrational ones also drop the exceptional components."""
    if profile.irrational:
        return b2 - 1 - profile.exceptional_components
    return b2 - 2


def series_elkies(series: str, singularities: Optional[Sequence[str]] = None) -> SeriesElkies:
    """
    The E column: ⌊Elkies⌋ over the (−2)-lines plus the (−1)-lines through O.

    ``singularities`` overrides the profile's non-simple points (labels are
    resolved in the catalog; unknown labels raise UnknownSingularityError).
    """
    profile = get_profile(series)
    if singularities is not None:
        b2 = betti(profile.q_irregularity, list(singularities))
    else:
        b2 = profile.b2_rational
    n = projection_dimension(profile, b2)
    tau1, tau2 = normalized_taus(profile.q0)
    first = elkies_bound(ElkiesInput(n, tau1, tau2))
    steps = [f"b2 = {b2}, n = {n}, τ = ({tau1}, {tau2}): {first.value} → {first.floor}"]
    result = SeriesElkies(profile.series, n, first.floor, profile.k_line_max, steps=steps)

    if profile.ell_cross:
        steps.append(f"plain bound {result.total}")
        # drop ℓ× and project to the ℓ0-complement, where q0 becomes −2
        tau1, tau2 = normalized_taus(-2)
        second = elkies_bound(ElkiesInput(n - 1, tau1, tau2))
        steps.append(f"ℓ0-complement n = {n - 1}, τ = ({tau1}, {tau2}): {second.value}, +1 for ℓ×")
        result.n = n - 1
        result.lines_bound = second.floor
        result.extra = 1

    steps.append(f"total {result.lines_bound} + {result.extra} + {result.k_lines} = {result.total}")
    logger.debug(f"{profile.title} Elkies: " + '; '.join(steps))
    return result
