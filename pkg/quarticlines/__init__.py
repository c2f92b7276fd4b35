"""
🔷 quarticlines
Lines on non-K3 quartic surfaces, bounded and classified with exact lattice arithmetic.

Dual-lattice vector enumeration, maximal admissible line sets, Elkies bounds
and the per-series classification pipelines.
"""

__version__ = "0.1.0"

from .core.lattice import Lattice, DiscClass, discriminant_group, parse_lattice
from .core.enumeration import DualVector, VecQuery, enumerate_vectors, vec_plus, vec_std
from .core.worker import SearchWorker, SearchConfig
from .core.monitor import SearchMonitor, MonitorConfig
from .configs.admissible import (
    LineConfiguration,
    Strategy,
    admissible_sets,
    bnd,
    classify,
    embedding_orbits,
)
from .configs.validator import create_filter, emax, triangle_filter
from .bounds import betti, elkies_bound, get_profile, series_elkies, table_report
from .interfaces.python.api import Pipeline, PipelineConfig, pipeline

__all__ = [
    # Core
    'Lattice',
    'DiscClass',
    'discriminant_group',
    'parse_lattice',
    'DualVector',
    'VecQuery',
    'enumerate_vectors',
    'vec_plus',
    'vec_std',
    'SearchWorker',
    'SearchConfig',
    'SearchMonitor',
    'MonitorConfig',

    # Configurations
    'LineConfiguration',
    'Strategy',
    'admissible_sets',
    'bnd',
    'classify',
    'embedding_orbits',
    'create_filter',
    'emax',
    'triangle_filter',

    # Bounds
    'betti',
    'elkies_bound',
    'get_profile',
    'series_elkies',
    'table_report',

    # High-level API
    'Pipeline',
    'PipelineConfig',
    'pipeline',
]
