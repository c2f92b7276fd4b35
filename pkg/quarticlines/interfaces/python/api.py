#!/usr/bin/env python3
"""
quarticlines Python API
High-level interface for the per-series classification pipeline.

Usage:
    from quarticlines import Pipeline, PipelineConfig

    report = Pipeline(PipelineConfig(series='X')).run()
    for survivor in report.survivors:
        print(survivor.size, survivor.shape, survivor.total_with_k_lines)
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from ...bounds.profiles import SeriesProfile, get_profile
from ...configs.admissible import (
    AdmissibleSet,
    LineConfiguration,
    SearchSpace,
    Strategy,
    classify,
    profile_space,
)
from ...configs.graphs import to_dot
from ...configs.validator import (
    BaseFilter,
    EmaxResult,
    FilterResult,
    create_filter,
    emax,
)
from ...core.worker import SearchConfig, SearchWorker

logger = logging.getLogger(__name__)

PIPELINE_SERIES = ('T', 'X', 'Jstar', 'J', 'L')
WITNESS_SCOPES = ('set', 'all')


@dataclass
class PipelineConfig:
    """Configuration for one pipeline run"""
    series: str = 'X'
    strategy: Optional[str] = None  # None: the series default
    min_size: Optional[int] = None
    ell_cross: bool = True  # J* only: whether the line ℓ× is present
    witness_scope: str = 'set'
    extended: bool = False
    jobs: Optional[int] = None
    checkpoint_dir: Optional[str] = None
    run_id: Optional[str] = None

    def __post_init__(self):
        if self.witness_scope not in WITNESS_SCOPES:
            raise ValueError(f"Unknown witness scope: {self.witness_scope} "
                             f"(expected one of {', '.join(WITNESS_SCOPES)})")


@dataclass
class Survivor:
    """A set that passed the filters, with its totals."""
    found: AdmissibleSet
    configuration: LineConfiguration
    shape: str
    dynkin: str
    emax: EmaxResult
    result: FilterResult
    total_with_k_lines: int
    trial: Optional[bool] = None
    attachments_ok: Optional[bool] = None
    attachment_class: Optional[str] = None

    @property
    def size(self) -> int:
        return self.found.size

    def to_dict(self) -> dict:
        out = {
            'size': self.size,
            'shape': self.shape,
            'dynkin': self.dynkin,
            'emax_size': self.emax.size,
            'total_with_k_lines': self.total_with_k_lines,
            'certificate': self.found.certificate.hex(),
            'members': list(self.found.members),
        }
        if self.trial is not None:
            out['exceptional_trial'] = self.trial
        if self.attachments_ok is not None:
            out['attachment_invariant'] = self.attachments_ok
        if self.attachment_class is not None:
            out['attachment_class'] = self.attachment_class
        return out


@dataclass
class PipelineReport:
    series: str
    strategy: str
    searched: int = 0
    survivors: List[Survivor] = field(default_factory=list)
    rejected: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def totals(self) -> List[int]:
        return sorted({s.total_with_k_lines for s in self.survivors}, reverse=True)

    def shapes(self) -> List[dict]:
        return [c.to_dict() for c in classify([s.configuration for s in self.survivors])]

    def attachment_orbits(self, size: Optional[int] = None) -> int:
        """Distinct attachment classes among the survivors, optionally of one size."""
        return len({s.attachment_class for s in self.survivors
                    if s.attachment_class is not None and (size is None or s.size == size)})

    def to_dict(self) -> dict:
        return {
            'series': self.series,
            'strategy': self.strategy,
            'searched': self.searched,
            'survivors': [s.to_dict() for s in self.survivors],
            'rejected': len(self.rejected),
            'totals': self.totals,
            'attachment_orbits': self.attachment_orbits(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False)

    def to_dot(self) -> str:
        return ''.join(to_dot(s.configuration.fano_graph(), f"{self.series}_{k + 1}_{s.size}")
                       for k, s in enumerate(self.survivors))


class Pipeline:
    """
    admissible sets → Ē_max → filters → shapes for one series.

    The J*-series is searched without the universal line ℓ× (added back in
    the totals) when ``ell_cross`` is set, and as a triangle-free search
    otherwise.
    """

    def __init__(self, config: Optional[PipelineConfig] = None):
        self.config = config or PipelineConfig()
        self.profile: SeriesProfile = get_profile(self.config.series)
        if self.profile.series not in PIPELINE_SERIES:
            raise ValueError(f"No classification pipeline for series {self.profile.series} "
                             f"(available: {', '.join(PIPELINE_SERIES)})")
        self.with_ell_cross = self.profile.ell_cross and self.config.ell_cross
        self.space: Optional[SearchSpace] = None

    def strategy(self) -> Strategy:
        if self.config.strategy:
            return Strategy.parse(self.config.strategy, self.config.min_size)
        if self.profile.ell_cross and not self.with_ell_cross:
            return Strategy('triangle-free', self.config.min_size or 10)
        return Strategy(self.profile.strategy, self.config.min_size or self.profile.min_size)

    def extra_lines(self) -> int:
        """Lines outside the searched set: (−1)-lines, plus ℓ× when it was dropped."""
        return self.profile.k_line_max + (1 if self.with_ell_cross else 0)

    def build_filter(self) -> Optional[BaseFilter]:
        series = self.profile.series
        witness_pool = self.space.vectors if self.config.witness_scope == 'all' else None
        if series == 'Jstar':
            return create_filter('jstar', has_ell_cross=self.with_ell_cross)
        if series in ('T', 'X', 'J'):
            return create_filter('triangle', witness_pool=witness_pool)
        return None

    def search(self, strategy: Strategy) -> List[AdmissibleSet]:
        overrides = {
            'jobs': self.config.jobs,
            'checkpoint_dir': self.config.checkpoint_dir,
            'run_id': self.config.run_id or f"{self.profile.series}-{strategy.label}".replace(':', '-'),
            'persist': self.config.extended,
        }
        worker = SearchWorker(self.space, strategy, SearchConfig.from_env(**overrides))
        return worker.run()

    def run(self) -> PipelineReport:
        profile = self.profile
        strategy = self.strategy()
        self.space = profile_space(profile, drop_universal=self.with_ell_cross)
        check = self.build_filter()
        trial = None
        if profile.max_exceptional is not None:
            trial = create_filter('exceptional-trial', inner=check,
                                  max_exceptional=profile.max_exceptional)
        sigma = self.space.lattice
        lambdas = self.space.lambdas if profile.emax_uses_lambda else ()

        report = PipelineReport(series=profile.series, strategy=strategy.label)
        found = sorted(self.search(strategy), key=AdmissibleSet.sort_key)
        report.searched = len(found)
        for item in found:
            vectors = self.space.vectors_of(item.members)
            roots = emax(vectors, sigma, lambdas)
            result = check.check(vectors, roots.all_roots) if check else FilterResult(True)
            if not result.passed:
                report.rejected.append({'members': list(item.members), **result.to_dict()})
                continue
            configuration = LineConfiguration.from_space(self.space, item.members, profile,
                                                         name=f"{profile.series}-{item.size}")
            shape = configuration.shape()
            survivor = Survivor(
                found=item,
                configuration=configuration,
                shape=shape.name,
                dynkin=shape.dynkin.label,
                emax=roots,
                result=result,
                total_with_k_lines=item.size + self.extra_lines(),
            )
            if trial is not None and roots:
                survivor.trial = trial.check(vectors, roots.all_roots).passed
            if profile.series == 'X':
                survivor.attachments_ok = configuration.attachment_invariant(4)
                if survivor.attachments_ok:
                    survivor.attachment_class = configuration.attachment_class().hex()
            report.survivors.append(survivor)

        logger.info(f"{profile.title}: {report.searched} sets, {len(report.survivors)} survive, "
                    f"totals {report.totals}")
        return report


def pipeline(series: str, **options) -> PipelineReport:
    """Run the classification pipeline for ``series`` with PipelineConfig options."""
    return Pipeline(PipelineConfig(series=series, **options)).run()
