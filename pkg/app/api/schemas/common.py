# encoding: utf-8

from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.exceptions import ConfigError

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/16 下午8:10
@desc: 命令行通用 Schema：采样网格 GridSpec（start:stop:count[:lin|geom]）与向量解析，供各子命令复用。
"""

VECTOR_SEPARATOR = ","


def format_number(value: float) -> str:
    """最短可往返的十进制表示"""
    return repr(float(value))


def parse_vector(text: str) -> tuple[float, ...]:
    """
    "0.5,0,0" → (0.5, 0.0, 0.0)
    """
    parts = [p.strip() for p in str(text).split(VECTOR_SEPARATOR)]
    try:
        values = tuple(float(p) for p in parts)
    except ValueError:
        raise ConfigError(f"cannot parse vector {text!r}: expected comma-separated numbers")
    if not values or not all(np.isfinite(values)):
        raise ConfigError(f"vector {text!r} must be non-empty and finite")
    return values


def format_vector(values: tuple[float, ...]) -> str:
    return VECTOR_SEPARATOR.join(format_number(v) for v in values)


class GridSpec(BaseModel):
    """
    采样网格：
      - start / stop: 端点（都包含）
      - count: 点数
      - mode: lin 等距；geom 等比（要求端点同号且非零）
    """
    model_config = ConfigDict(frozen=True)

    start: float
    stop: float
    count: int = Field(..., ge=1, description="采样点数")
    mode: Literal["lin", "geom"] = "lin"

    @model_validator(mode="after")
    def _check(self) -> "GridSpec":
        if self.count > 1 and not self.stop > self.start:
            raise ValueError(f"grid must be increasing, got {self.start} -> {self.stop}")
        if self.mode == "geom" and not (self.start > 0 and self.stop > 0):
            raise ValueError("geometric grids need positive endpoints")
        return self

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        parts = [p.strip() for p in str(text).split(":")]
        if len(parts) not in (3, 4):
            raise ConfigError(f"cannot parse grid {text!r}: expected start:stop:count[:lin|geom]")
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise ConfigError(f"cannot parse grid {text!r}: start/stop must be numbers and count an integer")
        mode = parts[3] if len(parts) == 4 else "lin"
        try:
            return cls(start=start, stop=stop, count=count, mode=mode)
        except ValueError as e:
            raise ConfigError(f"invalid grid {text!r}: {e}")

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.start])
        if self.mode == "geom":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)

    def text(self) -> str:
        return f"{format_number(self.start)}:{format_number(self.stop)}:{self.count}:{self.mode}"
