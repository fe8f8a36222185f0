# encoding: utf-8
import time
import uuid
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Iterator

from loguru import logger

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/13 下午3:20
@desc: 实验追踪中间层，负责实验 ID 生成、日志上下文绑定及耗时统计。
       每次 run(config) 都包在 track_experiment 里执行。
"""


@dataclass
class ExperimentTrace:
    experiment_id: str
    command: str
    started: float = field(default_factory=time.perf_counter)
    cost_ms: float = 0.0

    @property
    def wall_time(self) -> float:
        """秒"""
        return self.cost_ms / 1000.0


@contextmanager
def track_experiment(command: str, experiment_id: str | None = None) -> Iterator[ExperimentTrace]:
    """
    生成（或沿用）实验 ID，记录开始时间，结束时打印结构化耗时日志。
    """
    trace = ExperimentTrace(experiment_id=experiment_id or uuid.uuid4().hex[:12], command=command)
    with logger.contextualize(experiment_id=trace.experiment_id):
        logger.info(f"Experiment start | cmd={command} | exp_id={trace.experiment_id}")
        try:
            yield trace
        except Exception as e:
            trace.cost_ms = (time.perf_counter() - trace.started) * 1000
            logger.error(
                f"Experiment failed | cmd={command} | exp_id={trace.experiment_id} "
                f"| cost={trace.cost_ms:.2f}ms | error={e}"
            )
            raise
        trace.cost_ms = (time.perf_counter() - trace.started) * 1000
        logger.info(
            f"Experiment done | cmd={command} | exp_id={trace.experiment_id} | cost={trace.cost_ms:.2f}ms"
        )
