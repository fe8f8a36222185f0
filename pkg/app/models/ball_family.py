# encoding: utf-8
"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/14 下午5:30
@desc: 移动中心球族 E_s 及其水平函数。

       MinimalBallFamily：中心 (1-s)y、半径 r(s)=√(s(1-|y|²)+s²|y|²)，在 ⟨x,y⟩ < (1+|y|²)/2 的半空间上叶状；
       QBallFamily：中心 sy、半径 R_q(s)=√(s(1-q|y|²)+s²q|y|²)，q>1 时叶状整个 R^m。

       单点接口（level_function / level_gradient）按定义域严格报错；
       批量接口（values / values_and_gradients）用于求积节点，叶状区域之外返回 +inf。
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np
from loguru import logger

from app.core.config import settings
from app.core.consts import FOLIATION_FLOOR, Q_BRANCH_SWITCH
from app.core.exceptions import DomainError, GradientUndefinedError, MonoException, OutsideFoliationError
from app.models.patch import as_points, real_vec

# 定义恒等式自检的相对残差上限
_SELF_CHECK = 1e-10


class BallFamily(ABC):
    """移动中心球族的公共接口"""

    y: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.y.size)

    @property
    def y_norm2(self) -> float:
        return float(np.dot(self.y, self.y))

    @abstractmethod
    def centre_and_radius(self, s: float) -> tuple[np.ndarray, float]: ...

    @abstractmethod
    def values(self, x: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def values_and_gradients(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]: ...

    @abstractmethod
    def defining_residual(self, x: np.ndarray) -> np.ndarray: ...

    def radius(self, s: float) -> float:
        return self.centre_and_radius(s)[1]

    def _check_scale(self, s: float) -> float:
        s = float(s)
        if not s > 0:
            raise DomainError(f"scale s must be positive, got {s}")
        return s

    def _self_check(self, x: np.ndarray, f: np.ndarray) -> None:
        if not settings.debug:
            return
        ok = np.isfinite(f)
        if not np.any(ok):
            return
        res = np.abs(self.defining_residual(x[ok]))
        bound = _SELF_CHECK * (1.0 + np.sum(x[ok] ** 2, axis=1))
        if np.any(res > bound):
            i = int(np.argmax(res - bound))
            logger.error(f"defining identity self-check failed | family={type(self).__name__} residual={res[i]:.3e}")
            raise MonoException(
                f"{type(self).__name__} defining identity violated",
                data={"x": x[ok][i].tolist(), "residual": float(res[i])},
            )

    def level_function(self, x: np.ndarray) -> float:
        """f(x)；叶状区域外报 OutsideFoliationError"""
        xx = real_vec(x, self.dim)
        f = float(self.values(xx[None, :])[0])
        if not np.isfinite(f):
            raise OutsideFoliationError(
                f"point {xx.tolist()} lies outside the region foliated by the family",
                data={"x": xx.tolist(), "y": self.y.tolist()},
            )
        return f

    def level_gradient(self, x: np.ndarray) -> np.ndarray:
        """闭式梯度；f(x)=0（族的顶点）处无定义"""
        xx = real_vec(x, self.dim)
        f = self.level_function(xx)
        if f == 0.0:
            raise GradientUndefinedError(f"gradient of the level function is undefined at the vertex {xx.tolist()}")
        return self.values_and_gradients(xx[None, :])[1][0]

    def boundary_point(self, s: float, direction: np.ndarray) -> np.ndarray:
        c, r = self.centre_and_radius(s)
        e = real_vec(direction, self.dim)
        return c + r * e / np.linalg.norm(e)


@dataclass(frozen=True, eq=False)
class MinimalBallFamily(BallFamily):
    """
    f(x) = |x-y|² / (1 - 2⟨x,y⟩ + |y|²)，x ∈ ∂E_s ⇔ f(x) = s，且 E_1 = B(0,1)。
    """
    y: np.ndarray

    def __post_init__(self) -> None:
        yy = real_vec(self.y)
        if np.dot(yy, yy) >= 1.0:
            raise DomainError(f"|y| must be < 1, got |y|={np.linalg.norm(yy):.6g}")
        object.__setattr__(self, "y", yy)

    def centre_and_radius(self, s: float) -> tuple[np.ndarray, float]:
        s = self._check_scale(s)
        return (1.0 - s) * self.y, float(np.sqrt(self.rho(s)))

    def rho(self, s: float) -> float:
        """ρ(s) = r(s)²"""
        return s * (1.0 - self.y_norm2) + s * s * self.y_norm2

    def _denominator(self, x: np.ndarray) -> np.ndarray:
        return 1.0 - 2.0 * (x @ self.y) + self.y_norm2

    def values(self, x: np.ndarray) -> np.ndarray:
        xx = as_points(x, self.dim)
        den = self._denominator(xx)
        d = xx - self.y
        with np.errstate(divide="ignore", invalid="ignore"):
            f = np.where(den > FOLIATION_FLOOR, np.sum(d * d, axis=1) / np.where(den > 0, den, 1.0), np.inf)
        self._self_check(xx, f)
        return f

    def values_and_gradients(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """
        Df = 2f(x-y+fy)/|x-y|²，按 2(x-y+fy)/分母 计算，在 x=y 处连续为 0。
        """
        xx = as_points(x, self.dim)
        f = self.values(xx)
        den = self._denominator(xx)
        ok = np.isfinite(f)
        grad = np.full_like(xx, np.nan)
        grad[ok] = 2.0 * (xx[ok] - self.y + f[ok, None] * self.y) / den[ok, None]
        return f, grad

    def alternate_values(self, x: np.ndarray) -> np.ndarray:
        """第二种代数形式 |x-y|²/(1-|x|²+|x-y|²)，仅作交叉校验"""
        xx = as_points(x, self.dim)
        d = xx - self.y
        dd = np.sum(d * d, axis=1)
        den = 1.0 - np.sum(xx * xx, axis=1) + dd
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(den > FOLIATION_FLOOR, dd / np.where(den > 0, den, 1.0), np.inf)

    def defining_residual(self, x: np.ndarray) -> np.ndarray:
        """|x-(1-f)y|² - ρ(f)"""
        xx = as_points(x, self.dim)
        den = self._denominator(xx)
        d = xx - self.y
        f = np.sum(d * d, axis=1) / den
        c = xx - (1.0 - f)[:, None] * self.y
        return np.sum(c * c, axis=1) - (f * (1.0 - self.y_norm2) + f * f * self.y_norm2)

    def foliation_bound(self) -> float:
        """⟨x,y⟩ 的上界 (1+|y|²)/2"""
        return 0.5 * (1.0 + self.y_norm2)


@dataclass(frozen=True, eq=False)
class QBallFamily(BallFamily):
    """
    E_s^(q) = B(sy, R_q(s))，q ∈ [1, p]，q|y|² < 1。E_s^(q) 总包含原点。
    """
    y: np.ndarray
    q: float = 1.0

    def __post_init__(self) -> None:
        yy = real_vec(self.y)
        q = float(self.q)
        if q < 1.0:
            raise DomainError(f"q must be >= 1, got {q}")
        if q * np.dot(yy, yy) >= 1.0:
            raise DomainError(f"|y| must be < q^(-1/2), got |y|={np.linalg.norm(yy):.6g}, q={q}")
        object.__setattr__(self, "y", yy)
        object.__setattr__(self, "q", q)

    @property
    def quadratic_coefficient(self) -> float:
        """(q-1)|y|²"""
        return (self.q - 1.0) * self.y_norm2

    @property
    def uses_linear_branch(self) -> bool:
        return self.quadratic_coefficient < Q_BRANCH_SWITCH

    def centre_and_radius(self, s: float) -> tuple[np.ndarray, float]:
        s = self._check_scale(s)
        return s * self.y, float(np.sqrt(self.radius_squared(s)))

    def radius_squared(self, s: float | np.ndarray) -> float | np.ndarray:
        qy2 = self.q * self.y_norm2
        return s * (1.0 - qy2) + s * s * qy2

    def values(self, x: np.ndarray) -> np.ndarray:
        """
        f_q 是 (q-1)|y|² f² + b f - |x|² = 0 的非负根，b = 1 - q|y|² + 2⟨x,y⟩。
        b > 0 时用 2|x|²/(b+√(b²+4a|x|²)) 避免相消；a 很小时退化为 q=1 闭式 |x|²/b。
        """
        xx = as_points(x, self.dim)
        f = self._raw_values(xx)
        self._self_check(xx, f)
        return f

    def _raw_values(self, xx: np.ndarray) -> np.ndarray:
        a = self.quadratic_coefficient
        b = 1.0 - self.q * self.y_norm2 + 2.0 * (xx @ self.y)
        x2 = np.sum(xx * xx, axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            if self.uses_linear_branch:
                f = np.where(b > FOLIATION_FLOOR, x2 / np.where(b > 0, b, 1.0), np.inf)
                return np.where(x2 == 0.0, 0.0, f)
            disc = np.sqrt(b * b + 4.0 * a * x2)
            return np.where(b > 0, 2.0 * x2 / np.where(b > 0, b + disc, 1.0), (disc - b) / (2.0 * a))

    def values_and_gradients(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """∇f = 2(x - fy) / (1 - q|y|² + 2⟨x,y⟩ + 2(q-1)f|y|²)"""
        xx = as_points(x, self.dim)
        f = self.values(xx)
        ok = np.isfinite(f)
        den = 1.0 - self.q * self.y_norm2 + 2.0 * (xx @ self.y) + 2.0 * self.quadratic_coefficient * np.where(ok, f, 0.0)
        grad = np.full_like(xx, np.nan)
        grad[ok] = 2.0 * (xx[ok] - f[ok, None] * self.y) / den[ok, None]
        return f, grad

    def gradient_norm_identity(self, x: np.ndarray) -> np.ndarray:
        """|∇f| = 2f R_q(f) / (|x|² + (q-1)f²|y|²)"""
        xx = as_points(x, self.dim)
        f = self.values(xx)
        return 2.0 * f * np.sqrt(self.radius_squared(f)) / (np.sum(xx * xx, axis=1) + self.quadratic_coefficient * f * f)

    def defining_residual(self, x: np.ndarray) -> np.ndarray:
        """|x - f y|² - R_q(f)²"""
        xx = as_points(x, self.dim)
        f = self._raw_values(xx)
        c = xx - f[:, None] * self.y
        return np.sum(c * c, axis=1) - self.radius_squared(f)

    def direct_values(self, x: np.ndarray) -> np.ndarray:
        """q>1 分支的二次公式原式（-b+√(b²+4a|x|²))/(2a)，用于分支连续性校验"""
        xx = as_points(x, self.dim)
        a = self.quadratic_coefficient
        if a <= 0.0:
            raise DomainError("the quadratic-formula branch needs (q-1)|y|² > 0")
        b = 1.0 - self.q * self.y_norm2 + 2.0 * (xx @ self.y)
        return (-b + np.sqrt(b * b + 4.0 * a * np.sum(xx * xx, axis=1))) / (2.0 * a)

    def rigid_motion_partner(self) -> MinimalBallFamily:
        """q=1 时 f_q(x) = f_min(y - x)，f_min 为同一 y 的极小子流形球族"""
        if self.q != 1.0:
            raise DomainError("the rigid-motion relation holds for q = 1 only")
        return MinimalBallFamily(y=self.y.copy())

    def exit_radius(self, s: float, omega: np.ndarray) -> np.ndarray:
        """从原点沿单位方向 ω 到 ∂E_s 的距离 ⟨ω,c⟩ + √(⟨ω,c⟩² + R² - |c|²)"""
        c, r = self.centre_and_radius(s)
        oc = omega @ c
        return oc + np.sqrt(oc * oc + r * r - np.dot(c, c))
