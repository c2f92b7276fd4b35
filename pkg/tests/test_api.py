"""
Tests for the classification pipeline API

Run with: pytest tests/ -v
Run the searches: pytest tests/ -m slow
"""

import json

import pytest

from quarticlines import Pipeline, PipelineConfig, pipeline
from quarticlines.configs.admissible import Strategy
from quarticlines.configs.graphs import pretty_label
from quarticlines.configs.validator import series_filter_jstar


class TestPipelineConfig:
    """Options and their defaults"""

    def test_defaults(self):
        config = PipelineConfig()
        assert config.series == 'X'
        assert config.witness_scope == 'set'
        assert not config.extended

    def test_unknown_witness_scope(self):
        with pytest.raises(ValueError):
            PipelineConfig(witness_scope='everything')

    def test_series_without_pipeline(self):
        with pytest.raises(ValueError):
            Pipeline(PipelineConfig(series='X2,0'))

    def test_unknown_series(self):
        with pytest.raises(ValueError):
            Pipeline(PipelineConfig(series='Q'))


class TestPipelineSetup:
    """Strategies, filters and the lines outside the search"""

    def test_series_strategies(self):
        assert Pipeline(PipelineConfig(series='T')).strategy() == Strategy('size-at-least', 16)
        assert Pipeline(PipelineConfig(series='X')).strategy() == Strategy()
        assert Pipeline(PipelineConfig(series='Jstar')).strategy() == Strategy('size-at-least', 10)

    def test_jstar_without_ell_cross_is_triangle_free(self):
        runner = Pipeline(PipelineConfig(series='J*', ell_cross=False))
        assert not runner.with_ell_cross
        assert runner.strategy() == Strategy('triangle-free', 10)
        assert runner.extra_lines() == 1

    def test_jstar_with_ell_cross(self):
        runner = Pipeline(PipelineConfig(series='Jstar'))
        assert runner.with_ell_cross
        assert runner.extra_lines() == 2

    def test_explicit_strategy_wins(self):
        runner = Pipeline(PipelineConfig(series='T', strategy='size-at-least:17'))
        assert runner.strategy() == Strategy('size-at-least', 17)

    def test_extra_lines(self):
        assert Pipeline(PipelineConfig(series='T')).extra_lines() == 12
        assert Pipeline(PipelineConfig(series='X')).extra_lines() == 4
        assert Pipeline(PipelineConfig(series='J')).extra_lines() == 0


@pytest.mark.slow
class TestSeriesClassification:
    """Full pipeline runs"""

    @pytest.fixture(scope='class')
    def x_report(self):
        return pipeline('X')

    def test_x_sizes(self, x_report):
        sizes = [s.size for s in x_report.survivors]
        assert sizes.count(16) == 2
        assert sizes.count(14) == 6
        assert 15 not in sizes
        assert max(sizes) == 16

    def test_x_top_shape_is_gq31(self, x_report):
        top = {s.shape for s in x_report.survivors if s.size == 16}
        assert top == {'GQ(3,1)'}
        assert len({s.shape for s in x_report.survivors if s.size == 14}) == 4

    def test_x_totals(self, x_report):
        totals = x_report.totals
        assert totals[0] == 20
        assert all(t <= 18 for t in totals[1:])

    def test_x_report_serializes(self, x_report):
        data = json.loads(x_report.to_json())
        assert data['series'] == 'X'
        assert x_report.to_dot().startswith('graph X_1_16 {')

    def test_x_attachment_orbits(self, x_report):
        top = [s for s in x_report.survivors if s.size == 16]
        assert all(s.attachments_ok for s in top)
        assert x_report.attachment_orbits(16) == 2
        assert x_report.to_dict()['attachment_orbits'] >= 2

    @pytest.fixture(scope='class')
    def jstar_report(self):
        return pipeline('Jstar')

    def test_jstar_totals(self, jstar_report):
        assert jstar_report.totals == [14, 12]
        shapes = {s.shape for s in jstar_report.survivors}
        assert shapes == {pretty_label('4~A2'), pretty_label('3~A2+A1')}
        assert {s.size for s in jstar_report.survivors if s.total_with_k_lines == 12} == {10}

    def test_jstar_filter_on_four_triangles(self, jstar_report):
        top = [s for s in jstar_report.survivors if s.shape == pretty_label('4~A2')]
        assert top
        vectors = top[0].configuration.eta_vectors
        assert series_filter_jstar(vectors, has_ell_cross=True).passed
        assert not series_filter_jstar(vectors, has_ell_cross=False).passed

    def test_jstar_without_ell_cross(self):
        assert pipeline('Jstar', ell_cross=False).totals[0] == 11
