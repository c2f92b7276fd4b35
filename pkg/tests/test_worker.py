"""
Tests for the checkpointing search worker and the progress monitor

Run with: pytest tests/ -v
"""

import json
import os
from unittest.mock import MagicMock

import pytest

from quarticlines.configs.admissible import OrbitSearch, Strategy, search_space
from quarticlines.core.lattice import discriminant_group, parse_lattice
from quarticlines.core.monitor import MonitorConfig, SearchMonitor
from quarticlines.core.worker import SearchConfig, SearchWorker


@pytest.fixture(scope='module')
def space():
    lattice = parse_lattice('A1+A2')
    return search_space(lattice, discriminant_group(lattice).zero())


@pytest.fixture
def config(tmp_path):
    return SearchConfig(checkpoint_dir=str(tmp_path), checkpoint_interval=2, jobs=1,
                        run_id='a1a2', persist=True)


class TestSearchConfig:
    """Environment configuration"""

    def test_from_env(self, monkeypatch, tmp_path):
        monkeypatch.setenv('QL_CHECKPOINT_DIR', str(tmp_path))
        monkeypatch.setenv('QL_CHECKPOINT_INTERVAL', '7')
        monkeypatch.setenv('QL_JOBS', '3')
        monkeypatch.delenv('REDIS_URL', raising=False)
        monkeypatch.setenv('QL_PROGRESS_CHANNEL', 'ql:test-progress')
        config = SearchConfig.from_env(run_id='env-run', jobs=None)
        assert config.checkpoint_dir == str(tmp_path)
        assert config.checkpoint_interval == 7
        assert config.jobs == 3
        assert config.run_id == 'env-run'
        assert config.checkpoint_file.endswith('env-run.checkpoint.json')
        assert config.channel == 'ql:test-progress'

    def test_rejects_zero_interval(self, monkeypatch):
        monkeypatch.setenv('QL_CHECKPOINT_INTERVAL', '0')
        with pytest.raises(ValueError):
            SearchConfig.from_env()


class TestSearchWorker:
    """Runs, checkpoints and resumes"""

    def test_matches_the_plain_search(self, space, config):
        strategy = Strategy()
        found = SearchWorker(space, strategy, config).run()
        plain = list(OrbitSearch(space, strategy).run())
        assert [s.certificate for s in found] == [s.certificate for s in plain]

    def test_writes_checkpoint_and_log(self, space, config):
        SearchWorker(space, Strategy(), config).run()
        assert os.path.exists(config.checkpoint_file)
        assert os.path.exists(config.log_file)
        with open(config.checkpoint_file) as f:
            data = json.load(f)
        assert data['level'] == []
        assert data['stats']['status'] == 'completed'

    def test_resume_from_a_finished_run(self, space, config):
        first = SearchWorker(space, Strategy(), config).run()
        worker = SearchWorker(space, Strategy(), config)
        again = worker.run()
        assert [s.members for s in again] == [s.members for s in first]
        assert worker.stats['branches_done'] == 0

    def test_checkpoint_of_another_search(self, space, config):
        SearchWorker(space, Strategy(), config).run()
        with pytest.raises(ValueError):
            SearchWorker(space, Strategy('triangle-free'), config).run()

    def test_no_persistence(self, space, tmp_path):
        config = SearchConfig(checkpoint_dir=str(tmp_path / 'unused'), persist=False, jobs=1)
        found = SearchWorker(space, Strategy(), config).run()
        assert found
        assert not os.path.exists(tmp_path / 'unused')

    def test_publishes_on_the_configured_channel(self, space, config):
        config.channel = 'ql:a1a2-progress'
        worker = SearchWorker(space, Strategy(), config)
        worker.redis = MagicMock()
        worker._update_redis_stats(branches=3)
        worker.redis.hincrby.assert_called_once_with('ql:a1a2:progress', 'branches_done', 3)
        channel, message = worker.redis.publish.call_args[0]
        assert channel == 'ql:a1a2-progress'
        assert json.loads(message)['run_id'] == 'a1a2'


class TestSearchMonitor:
    """Progress read back from checkpoints"""

    def test_reports_finished_runs(self, space, config):
        SearchWorker(space, Strategy(), config).run()
        monitor = SearchMonitor(MonitorConfig(checkpoint_dir=config.checkpoint_dir))
        assert monitor.run_ids() == ['a1a2']
        status = monitor.run_status('a1a2')
        assert status['status'] == 'completed'
        assert status['level_size'] == 0
        assert monitor.check_completion()
        assert 'a1a2' in monitor.create_progress_report()

    def test_empty_directory(self, tmp_path):
        monitor = SearchMonitor(MonitorConfig(checkpoint_dir=str(tmp_path)))
        assert monitor.run_ids() == []
        assert not monitor.check_completion()
        assert monitor.get_status_json()['runs'] == []

    def test_save_report(self, tmp_path):
        monitor = SearchMonitor(MonitorConfig(checkpoint_dir=str(tmp_path),
                                              report_dir=str(tmp_path / 'reports')))
        path = monitor.save_report('hello')
        with open(path) as f:
            assert f.read() == 'hello'

    def test_channel_from_env(self, monkeypatch):
        monkeypatch.setenv('QL_PROGRESS_CHANNEL', 'ql:other')
        assert MonitorConfig.from_env().channel == 'ql:other'

    def test_wait_returns_a_progress_message(self, tmp_path):
        monitor = SearchMonitor(MonitorConfig(checkpoint_dir=str(tmp_path), poll_seconds=0))
        assert monitor.wait() is None
        monitor.pubsub = MagicMock()
        monitor.pubsub.get_message.return_value = {'type': 'message', 'data': b'{"run_id": "a1a2"}'}
        assert monitor.wait() == {'run_id': 'a1a2'}
        monitor.pubsub.get_message.return_value = None
        assert monitor.wait() is None
