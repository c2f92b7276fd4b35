#!/usr/bin/env python3
"""
Search Progress Monitor
Progress reports for checkpointed searches, read from the checkpoint files
and, when configured, from the redis progress hashes.
"""

import os
import json
import glob
import time
import logging
from datetime import datetime
from typing import Dict, List, Optional
from dataclasses import dataclass

from dotenv import load_dotenv

from .worker import PROGRESS_CHANNEL, PROGRESS_KEY

logger = logging.getLogger(__name__)


@dataclass
class MonitorConfig:
    """Configuration for the monitor"""
    checkpoint_dir: str = "./checkpoints"
    report_dir: str = "./reports"
    redis_url: Optional[str] = None
    channel: str = PROGRESS_CHANNEL
    poll_seconds: float = 5.0

    @classmethod
    def from_env(cls) -> 'MonitorConfig':
        load_dotenv()
        return cls(
            checkpoint_dir=os.environ.get('QL_CHECKPOINT_DIR', './checkpoints'),
            report_dir=os.environ.get('QL_REPORT_DIR', './reports'),
            redis_url=os.environ.get('REDIS_URL') or None,
            channel=os.environ.get('QL_PROGRESS_CHANNEL', PROGRESS_CHANNEL),
        )


def _decode(value):
    return value.decode() if isinstance(value, bytes) else value


class SearchMonitor:
    """Monitor progress of checkpointed searches"""

    def __init__(self, config: Optional[MonitorConfig] = None):
        self.config = config or MonitorConfig.from_env()
        self.redis = None
        if self.config.redis_url:
            try:
                import redis
                self.redis = redis.from_url(self.config.redis_url)
                self.redis.ping()
            except Exception as e:
                logger.warning(f"Redis unavailable ({e}); reading checkpoints only")
                self.redis = None
        self.pubsub = None
        if self.redis is not None:
            try:
                self.pubsub = self.redis.pubsub()
                self.pubsub.subscribe(self.config.channel)
            except Exception as e:
                logger.warning(f"Cannot subscribe to {self.config.channel} ({e}); polling only")
                self.pubsub = None

    def run_ids(self) -> List[str]:
        pattern = os.path.join(self.config.checkpoint_dir, '*.checkpoint.json')
        return sorted(os.path.basename(p)[:-len('.checkpoint.json')] for p in glob.glob(pattern))

    def run_status(self, run_id: str) -> Dict:
        """Progress of one run; redis values win over the last checkpoint."""
        path = os.path.join(self.config.checkpoint_dir, f"{run_id}.checkpoint.json")
        status: Dict = {'run_id': run_id}
        if os.path.exists(path):
            with open(path) as f:
                data = json.load(f)
            status.update(data.get('stats', {}))
            status.update({
                'depth': data['depth'],
                'level_size': len(data['level']),
                'level_done': data['completed'],
                'next_size': len(data['next']),
                'sets_found': len(data['found']),
                'checkpoint_time': data.get('timestamp'),
            })
        if self.redis is not None:
            try:
                live = self.redis.hgetall(PROGRESS_KEY.format(run_id=run_id))
                status.update({_decode(k): _decode(v) for k, v in live.items()})
            except Exception as e:
                logger.warning(f"Redis read error: {e}")
        return status

    def get_status_json(self) -> Dict:
        runs = [self.run_status(r) for r in self.run_ids()]
        return {
            'runs': runs,
            'running': sum(1 for r in runs if r.get('status') == 'running'),
            'completed': sum(1 for r in runs if r.get('status') == 'completed'),
        }

    def create_progress_report(self) -> str:
        runs = [self.run_status(r) for r in self.run_ids()]
        report = f"""
📊 SEARCH PROGRESS REPORT
{'=' * 50}
⏰ Time: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}
🔍 Runs: {len(runs)}
"""
        for run in runs:
            status = run.get('status', 'unknown')
            icon = '🟢' if status == 'running' else '✅' if status == 'completed' else '🔴'
            report += (f"\n  {icon} {run['run_id']}: {run.get('space', '?')} "
                       f"[{run.get('strategy', '?')}] level {run.get('depth', '?')}, "
                       f"{run.get('level_done', 0)}/{run.get('level_size', 0)} branches, "
                       f"{run.get('sets_found', 0)} sets, status: {status}")
        if not runs:
            report += f"\n  No checkpoints in {self.config.checkpoint_dir}"
        report += f"\n{'=' * 50}\n"
        return report

    def save_report(self, report: str) -> str:
        os.makedirs(self.config.report_dir, exist_ok=True)
        path = os.path.join(self.config.report_dir,
                            f"progress_{datetime.now().strftime('%Y%m%d-%H%M%S')}.txt")
        with open(path, 'w') as f:
            f.write(report)
        return path

    def wait(self) -> Optional[Dict]:
        """Block for one poll interval; a progress message on the channel ends it early."""
        if self.pubsub is None:
            time.sleep(self.config.poll_seconds)
            return None
        try:
            message = self.pubsub.get_message(ignore_subscribe_messages=True,
                                              timeout=self.config.poll_seconds)
        except Exception as e:
            logger.warning(f"Redis subscribe error: {e}")
            time.sleep(self.config.poll_seconds)
            return None
        if not message or message.get('type') != 'message':
            return None
        return json.loads(_decode(message['data']))

    def check_completion(self) -> bool:
        runs = [self.run_status(r) for r in self.run_ids()]
        return bool(runs) and all(r.get('status') == 'completed' for r in runs)

    def run(self, max_polls: Optional[int] = None):
        """Print a report every poll until every known run has completed."""
        polls = 0
        while max_polls is None or polls < max_polls:
            try:
                print(self.create_progress_report())
                if self.check_completion():
                    print("✅ ALL SEARCHES COMPLETED")
                    self.save_report(self.create_progress_report())
                    break
                polls += 1
                self.wait()
            except KeyboardInterrupt:
                print("\n⚠️ Monitor stopped by user")
                break
