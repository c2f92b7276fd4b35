"""Class names on the command line: eta, lambda, zero, gamma or coordinates."""

import logging
from typing import Optional, Tuple

from ...bounds.profiles import SeriesProfile, get_profile, profile_classes, profile_for_lattice
from ...configs.admissible import BoundResult, bound_search
from ...core.enumeration import window_norm
from ...core.exact import as_fraction
from ...core.lattice import DiscClass, Lattice, discriminant_group

logger = logging.getLogger(__name__)

CLASS_NAMES = ('eta', 'lambda', 'zero', 'gamma')


def _profile(lattice: Lattice, series: Optional[str]) -> SeriesProfile:
    profile = get_profile(series) if series else profile_for_lattice(lattice.name)
    if profile is None:
        raise ValueError(f"No series uses {lattice.name}; pass --series or class coordinates")
    return profile


def resolve(lattice: Lattice, name: str,
            series: Optional[str] = None) -> Tuple[DiscClass, Optional[SeriesProfile]]:
    """The class called ``name`` and the series profile it was taken from."""
    group = discriminant_group(lattice)
    key = name.strip().lower()
    if key in ('0', 'zero'):
        return group.zero(), None
    if key in ('gamma', 'γ'):
        classes = [group.class_of(c) for c in group.elements() if any(c)]
        if not classes:
            raise ValueError(f"{lattice.name} is unimodular: no nonzero class")
        return min(classes, key=lambda c: (-c.rep_norm, c.coset_rep)), None
    if key in ('eta', 'η', 'lambda', 'λ'):
        profile = _profile(lattice, series)
        eta, lam = profile_classes(profile, lattice)
        cls = eta if key in ('eta', 'η') else lam
        if cls is None:
            raise ValueError(f"{lattice.name} has no {key} class for series {profile.series}")
        return cls, profile
    try:
        coords = tuple(int(x) for x in key.split(','))
    except ValueError:
        raise ValueError(f"Unknown class: {name} (expected {', '.join(CLASS_NAMES)} "
                         f"or comma-separated coordinates)") from None
    if len(coords) != len(group.invariant_factors):
        raise ValueError(f"{lattice.name} needs {len(group.invariant_factors)} class "
                         f"coordinates, got {len(coords)}")
    return group.class_of(coords), None


def resolve_class(lattice: Lattice, name: str, series: Optional[str] = None) -> DiscClass:
    return resolve(lattice, name, series)[0]


def default_norm(cls: DiscClass, name: str, window: Optional[str] = None):
    """The Vec⁺ window for η and the zero class, the standard window otherwise."""
    if window is None:
        window = 'plus' if name.strip().lower() in ('eta', 'η', 'zero', '0') else 'std'
    if window not in ('plus', 'std'):
        raise ValueError(f"Unknown window: {window} (expected plus or std)")
    return window_norm(cls, -4 if window == 'plus' else -2)


def lambda_context(lattice: Lattice, name: str, profile: Optional[SeriesProfile]):
    """λ-vectors and the η·λ meet value when ``name`` is η in the series' own Σ."""
    if profile is not None and name.strip().lower() in ('eta', 'η') \
            and profile.sigma().name == lattice.name:
        return profile.lambda_vectors(), profile.eta_meet
    return (), None


def lattice_bound(lattice: Lattice, name: str, series: Optional[str] = None,
                  q=None) -> BoundResult:
    """
    bnd for a named class. For η in a series lattice the λ-vectors are passed
    along, which only adds the incidence pruning.
    """
    cls, profile = resolve(lattice, name, series)
    q = default_norm(cls, name) if q is None else as_fraction(q)
    lambdas, meet = lambda_context(lattice, name, profile)
    return bound_search(lattice, cls, q, lambdas, meet)
