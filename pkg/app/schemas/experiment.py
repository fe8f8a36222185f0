# encoding: utf-8
"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/16 下午8:30
@desc: 实验配置与判定记录。

       ExperimentConfig 可由命令行参数与/或 `key = value` 文本文件（# 开头为注释）构造，
       to_text() 给出规范文本：按字段声明顺序、跳过空值、浮点数取最短往返表示，
       from_text(to_text()) 再输出的文本与原文逐字节一致。
"""
from __future__ import annotations

from enum import Enum
from pathlib import Path
from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from app.api.schemas.common import GridSpec, format_number, format_vector, parse_vector
from app.core.consts import CommandEnum, FaultEnum, FlowEnum, HeatFlowEnum, MapEnum, PathEnum, SurfaceEnum
from app.core.exceptions import ConfigError
from app.schemas.reports import CheckResult

NEAREST_ORIGIN = "on-surface-nearest-origin"

Vector = tuple[float, ...]


class ExperimentConfig(BaseModel):
    """一次实验的全部参数"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    command: CommandEnum

    # 极小曲面目录
    surface: SurfaceEnum = SurfaceEnum.FLAT_DISK
    orient_normal_to_y: bool = False
    normal: Vector = (0.0, 0.0, 1.0)
    tilt_deg: float = 30.0
    neck: float = Field(0.5, gt=0)
    pitch: float = Field(0.5, gt=0)
    cap_radius: float = Field(2.0, gt=0)
    y: Union[Literal["on-surface-nearest-origin"], Vector] = (0.0, 0.0, 0.0)
    c_h: Optional[float] = Field(None, ge=0)
    density_s_min: float = Field(0.01, gt=0)
    density_samples: int = Field(4, ge=2)
    s: GridSpec = GridSpec(start=1e-3, stop=1.0, count=64, mode="geom")

    # 平均曲率流
    flow: FlowEnum = FlowEnum.PLANE
    path: PathEnum = PathEnum.CONSTANT
    x0: Optional[Vector] = None
    y0: Union[Literal["normal", "axis"], Vector] = "normal"
    path_eps: float = 0.1
    t0: float = 0.0
    times: GridSpec = GridSpec(start=-1.0, stop=-0.1, count=16)
    a: float = 0.0

    # p-调和映射 / 热流
    map: MapEnum = MapEnum.RADIAL
    m: int = Field(3, ge=2)
    p: float = 2.0
    q: float = Field(2.0, ge=1)
    heat_flow: HeatFlowEnum = HeatFlowEnum.LINEAR
    heat_a: Vector = (1.0, 0.5, -0.25)
    t_start: float = -1.0

    # 求积与判定
    quad_cells: Optional[int] = Field(None, ge=1)
    quad_order: Optional[int] = Field(None, ge=2, le=10)
    quad_depth: Optional[int] = Field(None, ge=0, le=12)
    quad_tol: Optional[float] = Field(None, gt=0)
    tol: Optional[float] = Field(None, gt=0)
    seed: int = 0
    samples: int = Field(100, ge=1)

    # 输出
    out_csv: Optional[str] = None
    out_svg: Optional[str] = None
    out_json: Optional[str] = None
    inject_fault: FaultEnum = FaultEnum.NONE

    @field_validator("normal", "x0", "heat_a", mode="before")
    @classmethod
    def _vector(cls, v: Any) -> Any:
        return parse_vector(v) if isinstance(v, str) else v

    @field_validator("y", mode="before")
    @classmethod
    def _y(cls, v: Any) -> Any:
        if isinstance(v, str) and v.strip() != NEAREST_ORIGIN:
            return parse_vector(v)
        return v.strip() if isinstance(v, str) else v

    @field_validator("y0", mode="before")
    @classmethod
    def _y0(cls, v: Any) -> Any:
        if isinstance(v, str) and v.strip() not in ("normal", "axis"):
            return parse_vector(v)
        return v.strip() if isinstance(v, str) else v

    @field_validator("s", "times", mode="before")
    @classmethod
    def _grid(cls, v: Any) -> Any:
        return GridSpec.parse(v) if isinstance(v, str) else v

    # ---------- 规范文本 ----------

    @staticmethod
    def _format(value: Any) -> str:
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, Enum):
            return str(value.value)
        if isinstance(value, GridSpec):
            return value.text()
        if isinstance(value, tuple):
            return format_vector(value)
        if isinstance(value, float):
            return format_number(value)
        return str(value)

    def to_text(self) -> str:
        lines = []
        for name in type(self).model_fields:
            value = getattr(self, name)
            if value is None:
                continue
            lines.append(f"{name} = {self._format(value)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse_text(cls, text: str) -> tuple[dict[str, str], dict[str, int]]:
        """返回 (原始键值, 键 → 行号)；语法错误与未知键带行号报 ConfigError"""
        values: dict[str, str] = {}
        lines: dict[str, int] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}", data={"line": lineno})
            key, _, value = line.partition("=")
            key = key.strip().replace("-", "_")
            if key not in cls.model_fields:
                raise ConfigError(f"line {lineno}: unknown key {key!r}", data={"line": lineno, "key": key})
            if key in values:
                raise ConfigError(f"line {lineno}: duplicate key {key!r}", data={"line": lineno, "key": key})
            values[key] = value.strip()
            lines[key] = lineno
        return values, lines

    @classmethod
    def build(cls, values: dict[str, Any], lines: Optional[dict[str, int]] = None) -> "ExperimentConfig":
        """校验失败转为带字段（及行号）诊断的 ConfigError"""
        try:
            return cls.model_validate(values)
        except ValidationError as e:
            errors = []
            for err in e.errors():
                field = str(err["loc"][0]) if err["loc"] else ""
                entry = {"field": field, "msg": err["msg"]}
                if lines and field in lines:
                    entry["line"] = lines[field]
                errors.append(entry)
            first = errors[0] if errors else {"field": "", "msg": str(e)}
            where = f"line {first['line']}: " if "line" in first else ""
            raise ConfigError(f"{where}invalid value for {first['field']!r}: {first['msg']}", data=errors)

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        values, lines = cls.parse_text(text)
        return cls.build(values, lines)

    @classmethod
    def from_file(cls, path: str | Path) -> "ExperimentConfig":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))


class VerdictRecord(BaseModel):
    """一次实验的判定汇总"""
    experiment_id: str
    command: str
    passed: bool
    checks: list[CheckResult] = Field(default_factory=list)
    worst_residual: float = 0.0
    quadrature_bound: float = 0.0
    wall_time: float = 0.0
    summary: dict[str, Any] = Field(default_factory=dict)
    artifacts: dict[str, str] = Field(default_factory=dict)

    @classmethod
    def from_checks(cls, experiment_id: str, command: str, checks: list[CheckResult],
                    quadrature_bound: float = 0.0, summary: Optional[dict[str, Any]] = None) -> "VerdictRecord":
        return cls(
            experiment_id=experiment_id,
            command=command,
            passed=all(c.passed for c in checks),
            checks=checks,
            worst_residual=max((c.worst_residual for c in checks), default=0.0),
            quadrature_bound=quadrature_bound,
            summary=summary or {},
        )
