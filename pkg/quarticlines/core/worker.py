#!/usr/bin/env python3
"""
Search Worker
Runs an orbit search level by level, spreads the branches of a level over a
process pool and checkpoints progress so long censuses can be resumed.
"""

import os
import json
import time
import logging
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime
from typing import Any, Dict, List, Optional, Tuple
from dataclasses import dataclass, field

from dotenv import load_dotenv

from ..configs.admissible import AdmissibleSet, OrbitSearch, SearchSpace, Strategy

logger = logging.getLogger(__name__)

PROGRESS_KEY = 'ql:{run_id}:progress'
PROGRESS_CHANNEL = 'ql:progress'


@dataclass
class SearchConfig:
    """Configuration for a search worker"""
    checkpoint_dir: str = "./checkpoints"
    checkpoint_interval: int = 25  # completed branches between checkpoints
    jobs: int = 1
    redis_url: Optional[str] = None
    channel: str = PROGRESS_CHANNEL
    run_id: str = field(default_factory=lambda: datetime.now().strftime('run-%Y%m%d-%H%M%S'))
    persist: bool = True

    @classmethod
    def from_env(cls, **overrides) -> 'SearchConfig':
        load_dotenv()
        config = cls(
            checkpoint_dir=os.environ.get('QL_CHECKPOINT_DIR', './checkpoints'),
            checkpoint_interval=int(os.environ.get('QL_CHECKPOINT_INTERVAL', 25)),
            jobs=int(os.environ.get('QL_JOBS', os.cpu_count() or 1)),
            redis_url=os.environ.get('REDIS_URL') or None,
            channel=os.environ.get('QL_PROGRESS_CHANNEL', PROGRESS_CHANNEL),
        )
        for key, value in overrides.items():
            if value is not None:
                setattr(config, key, value)
        if config.checkpoint_interval < 1:
            raise ValueError(f"checkpoint_interval must be positive, got {config.checkpoint_interval}")
        return config

    @property
    def checkpoint_file(self) -> str:
        return os.path.join(self.checkpoint_dir, f"{self.run_id}.checkpoint.json")

    @property
    def log_file(self) -> str:
        return os.path.join(self.checkpoint_dir, f"{self.run_id}.log")


# Process-pool state: each worker process holds one search.
_SEARCH: Optional[OrbitSearch] = None


def _init_search(space: SearchSpace, strategy: Strategy):
    global _SEARCH
    _SEARCH = OrbitSearch(space, strategy)


def _expand(members: Tuple[int, ...]):
    return _SEARCH.expand(members)


def _level_items(level: Dict[bytes, Tuple[int, ...]]) -> List[List[Any]]:
    return [[cert.hex(), list(members)] for cert, members in level.items()]


def _level_from(items: List[List[Any]]) -> Dict[bytes, Tuple[int, ...]]:
    return {bytes.fromhex(cert): tuple(members) for cert, members in items}


def _found_from(data: dict) -> AdmissibleSet:
    return AdmissibleSet(tuple(data['members']), bytes.fromhex(data['certificate']),
                         data['maximal'])


class SearchWorker:
    """
    Drives an OrbitSearch to completion.

    Branches of one level are expanded in batches of ``checkpoint_interval``;
    children are merged in branch order so results never depend on the pool.
    """

    def __init__(self, space: SearchSpace, strategy: Strategy,
                 config: Optional[SearchConfig] = None):
        self.space = space
        self.strategy = strategy
        self.config = config or SearchConfig.from_env()
        self.search = OrbitSearch(space, strategy)
        self.redis = None
        self._handler: Optional[logging.Handler] = None

        self.stats = {
            'run_id': self.config.run_id,
            'space': space.name,
            'strategy': strategy.label,
            'start_time': None,
            'depth': 0,
            'branches_done': 0,
            'sets_found': 0,
            'status': 'initialized',
        }

        if self.config.persist:
            os.makedirs(self.config.checkpoint_dir, exist_ok=True)
            self._setup_logging()
        self._connect_redis()

    def _setup_logging(self):
        """Mirror this run's log records to <checkpoint_dir>/<run_id>.log"""
        self._handler = logging.FileHandler(self.config.log_file)
        self._handler.setFormatter(logging.Formatter('%(asctime)s - %(levelname)s - %(message)s'))
        logging.getLogger('quarticlines').addHandler(self._handler)

    def _connect_redis(self):
        if not self.config.redis_url:
            return
        try:
            import redis
            self.redis = redis.from_url(self.config.redis_url)
            self.redis.ping()
        except Exception as e:
            logger.warning(f"Redis unavailable ({e}); progress publishing disabled")
            self.redis = None

    def _update_redis_stats(self, branches: int = 0):
        if self.redis is None:
            return
        try:
            key = PROGRESS_KEY.format(run_id=self.config.run_id)
            if branches:
                self.redis.hincrby(key, 'branches_done', branches)
            self.redis.hset(key, mapping={k: str(v) for k, v in self.stats.items()})
            self.redis.publish(self.config.channel, json.dumps(self.stats))
        except Exception as e:
            logger.warning(f"Redis update error: {e}")

    # -- checkpoints --------------------------------------------------

    def _create_checkpoint(self, depth: int, level, completed: int, nxt, found, pending):
        if not self.config.persist:
            return
        checkpoint = {
            'run_id': self.config.run_id,
            'space': self.space.name,
            'strategy': self.strategy.label,
            'depth': depth,
            'level': _level_items(level),
            'completed': completed,
            'next': _level_items(nxt),
            'found': [s.to_dict() for s in found],
            'pending': [s.to_dict() for s in pending],
            'stats': self.stats,
            'timestamp': datetime.now().isoformat(),
        }
        tmp = self.config.checkpoint_file + '.tmp'
        with open(tmp, 'w') as f:
            json.dump(checkpoint, f, indent=2, sort_keys=True)
        os.replace(tmp, self.config.checkpoint_file)

    def load_checkpoint(self) -> Optional[dict]:
        path = self.config.checkpoint_file
        if not self.config.persist or not os.path.exists(path):
            return None
        with open(path) as f:
            data = json.load(f)
        if data.get('space') != self.space.name or data.get('strategy') != self.strategy.label:
            raise ValueError(f"Checkpoint {path} belongs to {data.get('space')} "
                             f"[{data.get('strategy')}], not {self.space.name} "
                             f"[{self.strategy.label}]")
        logger.info(f"Resuming {self.config.run_id} at level {data['depth']}, "
                    f"branch {data['completed']}/{len(data['level'])}")
        return data

    # -- main loop ----------------------------------------------------

    def _batches(self, items: List[Tuple[int, ...]]):
        size = self.config.checkpoint_interval
        for start in range(0, len(items), size):
            yield start, items[start:start + size]

    def run(self) -> List[AdmissibleSet]:
        """Run to completion (or resume); returns all emitted sets in order."""
        started = time.time()
        self.stats['start_time'] = datetime.now().isoformat()
        self.stats['status'] = 'running'

        state = self.load_checkpoint()
        if state:
            depth = state['depth']
            level = _level_from(state['level'])
            completed = state['completed']
            nxt = _level_from(state['next'])
            found = [_found_from(d) for d in state['found']]
            pending = [_found_from(d) for d in state['pending']]
        else:
            depth, level, completed, nxt, found, pending = 1, self.search.seeds(), 0, {}, [], []

        pool = None
        if self.config.jobs > 1:
            pool = ProcessPoolExecutor(max_workers=self.config.jobs, initializer=_init_search,
                                       initargs=(self.space, self.strategy))
        try:
            while level:
                self.stats['depth'] = depth
                branches = list(level.values())
                for start, batch in self._batches(branches[completed:]):
                    results = pool.map(_expand, batch) if pool else map(self.search.expand, batch)
                    for emitted, children in results:
                        if emitted is not None:
                            pending.append(emitted)
                        for cert, child in children.items():
                            nxt.setdefault(cert, child)
                    completed += len(batch)
                    self.stats['branches_done'] += len(batch)
                    self._update_redis_stats(len(batch))
                    self._create_checkpoint(depth, level, completed, nxt, found, pending)

                for item in sorted(pending, key=AdmissibleSet.sort_key):
                    self.search.check(item)
                    found.append(item)
                self.stats['sets_found'] = len(found)
                logger.info(f"{self.space.name} [{self.strategy.label}] level {depth}: "
                            f"{len(pending)} emitted, {len(nxt)} orbits next")
                depth, level, completed, nxt, pending = depth + 1, nxt, 0, {}, []
                self._create_checkpoint(depth, level, completed, nxt, found, pending)
        finally:
            if pool:
                pool.shutdown()

        self.stats['status'] = 'completed'
        self.stats['end_time'] = datetime.now().isoformat()
        self._create_checkpoint(depth, level, completed, nxt, found, pending)
        self._update_redis_stats()
        logger.info(f"""
Search {self.config.run_id} Complete!
========================
Space: {self.space.name} ({len(self.space)} vectors)
Strategy: {self.strategy.label}
Branches: {self.stats['branches_done']}
Sets found: {len(found)}
Time: {time.time() - started:.1f}s
""")
        self.close()
        return found

    def close(self):
        if self._handler is not None:
            logging.getLogger('quarticlines').removeHandler(self._handler)
            self._handler.close()
            self._handler = None
