# encoding: utf-8

from enum import Enum

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/13 下午2:46
@desc: 项目通用常量与枚举定义，集中管理数值下限、分支切换阈值以及命令/目录名称。
"""

# binary64 噪声下限：Gram 行列式不超过该值视为坐标卡退化
GRAM_FLOOR = 1e-14
# 水平集上 |∇(g∘embed)| 的下限
REGULAR_VALUE_FLOOR = 1e-10
# Newton 投影后 |g - c| 的上限
LEVEL_RESIDUAL = 1e-10
# q 族在 (q-1)|y|^2 低于该值时切换到 q=1 闭式
Q_BRANCH_SWITCH = 1e-10
# |∇u| 低于该值且 p<2 时按约定取零
CRITICAL_GRADIENT = 1e-14
# 高斯权重截断比例
GAUSSIAN_TAIL = 1e-16
# bulkIncrement 允许的最小尺度
MIN_BULK_SCALE = 1e-3
# 叶状区域分母的最小值
FOLIATION_FLOOR = 1e-300


class CommandEnum(str, Enum):
    MIN_MONO = "min-mono"
    BH_CHECK = "bh-check"
    MCF_MONO = "mcf-mono"
    ENTROPY = "entropy"
    PHARM_MONO = "pharm-mono"
    HEAT_MONO = "heat-mono"
    IDENTITY_SUITE = "identity-suite"


class SurfaceEnum(str, Enum):
    FLAT_DISK = "flat-disk"
    TILTED_PLANE = "tilted-plane"
    CATENOID = "catenoid"
    HELICOID = "helicoid"
    PLANE_PAIR = "plane-pair"
    SPHERICAL_CAP = "spherical-cap"


class FlowEnum(str, Enum):
    PLANE = "plane"
    SPHERE = "sphere"
    CIRCLE = "circle"
    CYLINDER = "cylinder"


class PathEnum(str, Enum):
    CONSTANT = "constant"
    LINE = "line"
    CIRCLE = "circle"
    PARABOLA = "parabola"


class MapEnum(str, Enum):
    CONSTANT = "constant"
    LINEAR = "linear"
    RADIAL = "radial"


class HeatFlowEnum(str, Enum):
    ZERO = "zero"
    LINEAR = "linear"
    HEAT_KERNEL = "heat-kernel"


class FaultEnum(str, Enum):
    NONE = "none"
    NEGATE_FLUX = "negate-flux"
    NEGATE_RHS = "negate-rhs"
