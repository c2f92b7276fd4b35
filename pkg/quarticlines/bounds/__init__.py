"""Elkies bounds, the singularity catalog, series profiles and summary tables."""

from .catalog import UnknownSingularityError, betti, chi_of_fiber, lookup
from .elkies import ElkiesInput, elkies_bound, series_elkies
from .profiles import (
    PROFILES,
    SeriesProfile,
    component_splits,
    get_profile,
    profile_classes,
    profile_for_lattice,
    sigma_candidates,
)
from .tables import table_report

__all__ = [
    'UnknownSingularityError',
    'betti',
    'chi_of_fiber',
    'lookup',
    'ElkiesInput',
    'elkies_bound',
    'series_elkies',
    'PROFILES',
    'SeriesProfile',
    'component_splits',
    'get_profile',
    'profile_classes',
    'profile_for_lattice',
    'sigma_candidates',
    'table_report',
]
