from enum import IntEnum
from typing import Any

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/12 下午6:21
@desc: 定义统一错误码和 MonoException 异常体系，全局异常处理据此给出规范输出和进程退出码。
       错误码按万位分段：2xxxx 判定失败，3xxxx 配置/定义域错误，4xxxx 数值求积未达标。
"""

class ErrorCode(IntEnum):
    """
    统一错误码定义
    """
    SUCCESS = 0

    VERDICT_FAILURE = 20000       # 单调性/恒等式判定失败

    CONFIG_ERROR = 30000          # 配置文件/参数错误
    VALIDATION_ERROR = 30001      # 参数校验失败
    DOMAIN_ERROR = 30002          # 超出定义域（s <= 0、|y| >= 1 等）
    OUTSIDE_FOLIATION = 30003     # 点不在球族叶状区域内
    GRADIENT_UNDEFINED = 30004    # f = 0 的顶点处梯度无定义
    BOUNDARY_CONTACT = 30005      # 曲面边界与闭球 E_s 相交

    QUADRATURE_TOLERANCE = 40000  # 求积误差界超过容差
    SINGULAR_CHART = 40001        # 坐标卡退化（Gram 行列式过小）
    REGULAR_VALUE = 40002         # 水平值接近临界值
    EXTRAPOLATION = 40003         # Richardson 外推不收敛

    INTERNAL_ERROR = 50000        # 未知系统错误


def exit_code_for(code: int) -> int:
    """错误码 → 进程退出码"""
    if code == ErrorCode.SUCCESS:
        return 0
    head = int(code) // 10000
    return {2: 2, 3: 3, 4: 4}.get(head, 1)


class MonoException(Exception):
    """
    业务异常：在 Service 里显式抛出，用来走统一异常处理
    """
    default_code: int = ErrorCode.INTERNAL_ERROR

    def __init__(self, msg: str, data: Any | None = None, code: int | None = None):
        self.code = int(code if code is not None else self.default_code)
        self.msg = msg
        self.data = data
        super().__init__(msg)

    def __str__(self) -> str:
        return f"[{self.code}] {self.msg}"

    @property
    def exit_code(self) -> int:
        return exit_code_for(self.code)


class VerdictFailure(MonoException):
    default_code = ErrorCode.VERDICT_FAILURE


class ConfigError(MonoException):
    default_code = ErrorCode.CONFIG_ERROR


class DomainError(MonoException):
    default_code = ErrorCode.DOMAIN_ERROR


class OutsideFoliationError(DomainError):
    default_code = ErrorCode.OUTSIDE_FOLIATION


class GradientUndefinedError(DomainError):
    default_code = ErrorCode.GRADIENT_UNDEFINED


class BoundaryContactError(DomainError):
    default_code = ErrorCode.BOUNDARY_CONTACT


class ToleranceNotMetError(MonoException):
    """data 中携带实际达到的误差界"""
    default_code = ErrorCode.QUADRATURE_TOLERANCE


class SingularChartError(MonoException):
    default_code = ErrorCode.SINGULAR_CHART


class RegularValueError(MonoException):
    default_code = ErrorCode.REGULAR_VALUE


class ExtrapolationError(MonoException):
    """data 中携带原始序列"""
    default_code = ErrorCode.EXTRAPOLATION
