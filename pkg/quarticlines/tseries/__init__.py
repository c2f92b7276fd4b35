"""T-series realizability: incidence fixtures and collinearity systems."""

from .collinearity import (
    GROUPS,
    CollinearitySystem,
    GroupSpec,
    RealizabilityVerdict,
    SnfAnalysis,
    TorsionSolution,
    get_group,
    modulus_sweep,
    realizability_verdict,
    snf_analysis,
    sum_relation_check,
    torsion_solution_search,
)
from .fixtures import FIXTURE_NAMES, IncidenceMatrix, builtin_config, load_config

__all__ = [
    'GROUPS',
    'CollinearitySystem',
    'GroupSpec',
    'RealizabilityVerdict',
    'SnfAnalysis',
    'TorsionSolution',
    'get_group',
    'modulus_sweep',
    'realizability_verdict',
    'snf_analysis',
    'sum_relation_check',
    'torsion_solution_search',
    'FIXTURE_NAMES',
    'IncidenceMatrix',
    'builtin_config',
    'load_config',
]
