"""Admissible line sets, their filters and their graph shapes."""

from .admissible import (
    AdmissibleSet,
    LineConfiguration,
    OrbitSearch,
    SearchSpace,
    Strategy,
    admissible_sets,
    bnd,
    classify,
    embedding_orbits,
    max_clique,
    profile_bnd,
    profile_space,
    search_space,
)
from .graphs import GraphShape, dynkin_shape, graph_shape, is_gq31, rook_graph, to_dot
from .validator import (
    CompositeFilter,
    ExceptionalTrialFilter,
    FilterResult,
    JStarFilter,
    TriangleFilter,
    create_filter,
    emax,
    series_filter_jstar,
    triangle_filter,
)

__all__ = [
    'AdmissibleSet',
    'LineConfiguration',
    'OrbitSearch',
    'SearchSpace',
    'Strategy',
    'admissible_sets',
    'bnd',
    'classify',
    'embedding_orbits',
    'max_clique',
    'profile_bnd',
    'profile_space',
    'search_space',
    'GraphShape',
    'dynkin_shape',
    'graph_shape',
    'is_gq31',
    'rook_graph',
    'to_dot',
    'CompositeFilter',
    'ExceptionalTrialFilter',
    'FilterResult',
    'JStarFilter',
    'TriangleFilter',
    'create_filter',
    'emax',
    'series_filter_jstar',
    'triangle_filter',
]
