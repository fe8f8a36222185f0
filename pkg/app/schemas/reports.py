# encoding: utf-8
"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/15 下午4:20
@desc: 各单调性实验的报告结构。报告按采样网格逐行展开为 MonotoneSeries，供 CSV/SVG 输出。
"""
from __future__ import annotations

from typing import ClassVar, Optional

from pydantic import BaseModel, Field


class CheckResult(BaseModel):
    """单项判定：residual ≤ tolerance 即通过"""
    name: str
    passed: bool
    worst_residual: float
    tolerance: float
    worst_at: Optional[float] = None
    detail: Optional[str] = None

    @classmethod
    def from_residuals(cls, name: str, residuals: list[float], tolerance: float,
                       grid: Optional[list[float]] = None, detail: Optional[str] = None) -> "CheckResult":
        live = [(abs(r), i) for i, r in enumerate(residuals) if r is not None]
        if not live:
            return cls(name=name, passed=True, worst_residual=0.0, tolerance=tolerance, detail=detail or "no samples")
        worst, idx = max(live)
        return cls(
            name=name,
            passed=bool(worst <= tolerance),
            worst_residual=float(worst),
            tolerance=float(tolerance),
            worst_at=None if grid is None else float(grid[idx]),
            detail=detail,
        )

    @classmethod
    def flag(cls, name: str, ok: bool, residual: float, tolerance: float, detail: Optional[str] = None) -> "CheckResult":
        return cls(name=name, passed=bool(ok), worst_residual=float(abs(residual)), tolerance=float(tolerance),
                   detail=detail)


class MonotoneSeries(BaseModel):
    """网格 + 有序列；None 输出为空单元格"""
    title: str
    grid_name: str
    grid: list[float]
    columns: dict[str, list[Optional[float]]]
    # 绘图时作为单调量的列
    primary: Optional[str] = None


class SeriesReport(BaseModel):
    """带网格与判定列表的报告基类"""
    grid_name: ClassVar[str] = "s"
    column_fields: ClassVar[tuple[str, ...]] = ()
    primary_field: ClassVar[Optional[str]] = None

    title: str = ""
    grid: list[float] = Field(default_factory=list)
    checks: list[CheckResult] = Field(default_factory=list)
    quadrature_bound: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_series(self) -> MonotoneSeries:
        columns = {}
        for name in self.column_fields:
            values = getattr(self, name)
            if values:
                columns[name] = list(values)
        return MonotoneSeries(title=self.title, grid_name=self.grid_name, grid=list(self.grid),
                              columns=columns, primary=self.primary_field)


class MinimalMonoReport(SeriesReport):
    column_fields = ("ratio", "boundary_flux", "fd_derivative", "bulk_increment", "ratio_difference",
                     "almost_factor", "corrected_ratio", "residual")
    primary_field = "ratio"

    ratio: list[float] = Field(default_factory=list)
    boundary_flux: list[Optional[float]] = Field(default_factory=list)
    fd_derivative: list[Optional[float]] = Field(default_factory=list)
    # 第 i 行为 (grid[i-1], grid[i]) 上的增量
    bulk_increment: list[Optional[float]] = Field(default_factory=list)
    ratio_difference: list[Optional[float]] = Field(default_factory=list)
    almost_factor: list[float] = Field(default_factory=list)
    corrected_ratio: list[float] = Field(default_factory=list)
    residual: list[Optional[float]] = Field(default_factory=list)
    verdict: str = "monotone"


class BHFieldSample(BaseModel):
    x: list[float]
    w: list[float]
    w0: list[float]
    div_analytic: float
    div_closed_form: float
    div_numeric: float

    @property
    def analytic_error(self) -> float:
        return abs(self.div_analytic - self.div_closed_form) / max(1.0, abs(self.div_closed_form))

    @property
    def numeric_error(self) -> float:
        """差分散度的误差，受截断误差限制"""
        return abs(self.div_numeric - self.div_closed_form) / max(1.0, abs(self.div_closed_form))


class BrendleHungReport(SeriesReport):
    column_fields = ("ratio",)
    primary_field = "ratio"

    ratio: list[float] = Field(default_factory=list)
    ratio_at_one: float = 0.0
    density: float = 1.0
    density_raw: float = 1.0
    bound: float = 0.0
    margin: float = 0.0
    equality: bool = False


class McfReport(SeriesReport):
    grid_name = "t"
    column_fields = ("density", "dissipation", "excess", "rhs", "fd_derivative", "residual", "corrected_quantity")
    primary_field = "corrected_quantity"

    density: list[float] = Field(default_factory=list)
    dissipation: list[float] = Field(default_factory=list)
    excess: list[float] = Field(default_factory=list)
    rhs: list[float] = Field(default_factory=list)
    fd_derivative: list[float] = Field(default_factory=list)
    residual: list[float] = Field(default_factory=list)
    corrected_quantity: list[float] = Field(default_factory=list)


class EntropyReport(SeriesReport):
    column_fields = ("entropy", "rhs", "fd_derivative", "residual")
    primary_field = "entropy"

    entropy: list[float] = Field(default_factory=list)
    rhs: list[float] = Field(default_factory=list)
    fd_derivative: list[float] = Field(default_factory=list)
    residual: list[float] = Field(default_factory=list)


class PharmReport(SeriesReport):
    column_fields = ("ratio", "a_term", "b_term", "boundary_sum", "fd_derivative", "bulk_increment",
                     "ratio_difference", "residual", "scaled_energy", "rigid_ratio")
    primary_field = "ratio"

    ratio: list[float] = Field(default_factory=list)
    a_term: list[float] = Field(default_factory=list)
    b_term: list[float] = Field(default_factory=list)
    boundary_sum: list[float] = Field(default_factory=list)
    fd_derivative: list[float] = Field(default_factory=list)
    bulk_increment: list[Optional[float]] = Field(default_factory=list)
    ratio_difference: list[Optional[float]] = Field(default_factory=list)
    residual: list[float] = Field(default_factory=list)
    scaled_energy: list[float] = Field(default_factory=list)
    rigid_ratio: list[float] = Field(default_factory=list)
    constant: bool = False


class HeatReport(SeriesReport):
    grid_name = "t"
    column_fields = ("energy", "dissipation", "excess", "rhs", "fd_derivative", "residual", "corrected_quantity")
    primary_field = "corrected_quantity"

    energy: list[float] = Field(default_factory=list)
    dissipation: list[float] = Field(default_factory=list)
    excess: list[float] = Field(default_factory=list)
    rhs: list[float] = Field(default_factory=list)
    fd_derivative: list[float] = Field(default_factory=list)
    residual: list[float] = Field(default_factory=list)
    corrected_quantity: list[float] = Field(default_factory=list)


class SuiteReport(SeriesReport):
    """identity-suite：每项检查一行"""
    grid_name = "index"
    seed: int = 0
