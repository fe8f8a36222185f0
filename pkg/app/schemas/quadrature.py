# encoding: utf-8

from dataclasses import dataclass

from pydantic import BaseModel, ConfigDict, Field

from app.core.config import settings

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/13 下午5:10
@desc: 求积参数与求积结果的数据结构定义。
"""


class QuadratureSpec(BaseModel):
    """
    参数盒上的张量 Gauss 求积参数。
    """
    model_config = ConfigDict(frozen=True)

    cells_per_axis: int = Field(default_factory=lambda: settings.quadrature.cells_per_axis, ge=1,
                                description="每个参数方向的初始单元数")
    order: int = Field(default_factory=lambda: settings.quadrature.order, ge=2, le=10,
                       description="每个单元每个方向的 Gauss 点数")
    refinement_depth: int = Field(default_factory=lambda: settings.quadrature.refinement_depth, ge=0, le=12,
                                  description="跨水平集单元的最大二分细化深度")
    level_grid: int = Field(default_factory=lambda: settings.quadrature.level_grid, ge=8,
                            description="marching squares 参数网格的每边单元数")
    tolerance: float = Field(default_factory=lambda: settings.quadrature.tolerance, gt=0,
                             description="误差界相对 max(1,|I|) 的上限")

    def halved(self) -> "QuadratureSpec":
        """单元尺寸减半后的参数"""
        return self.model_copy(update={"cells_per_axis": 2 * self.cells_per_axis})


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_bound: float
    cells: int = 0
    unresolved: int = 0

    def __float__(self) -> float:
        return self.value

    def __add__(self, other: "QuadratureResult") -> "QuadratureResult":
        return QuadratureResult(
            value=self.value + other.value,
            error_bound=self.error_bound + other.error_bound,
            cells=self.cells + other.cells,
            unresolved=self.unresolved + other.unresolved,
        )

    def scaled(self, factor: float) -> "QuadratureResult":
        return QuadratureResult(self.value * factor, self.error_bound * abs(factor), self.cells, self.unresolved)
