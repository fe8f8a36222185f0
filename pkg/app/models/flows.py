# encoding: utf-8
"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/15 上午9:40
@desc: 平均曲率流的闭式解目录、移动中心路径 y(t) 以及高斯权重 Φ_{y(t),t0}。
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from app.core.config import settings
from app.core.consts import GAUSSIAN_TAIL
from app.core.exceptions import DomainError
from app.infra.quadrature import gauss_interval
from app.models.patch import CylinderSurface, ParametricPatch, PlaneSurface, as_points, circle, real_vec, sphere


# ========= 中心路径 =========

class CentrePath(ABC):
    label: str = "path"
    dim: int

    @abstractmethod
    def position(self, t: float) -> np.ndarray: ...

    @abstractmethod
    def velocity(self, t: float) -> np.ndarray: ...

    def speed_squared(self, t: np.ndarray) -> np.ndarray:
        return np.array([float(np.dot(v, v)) for v in (self.velocity(float(s)) for s in np.atleast_1d(t))])

    def energy(self, t: float, t0: float, nodes: Optional[int] = None) -> float:
        """∫_t^{t0} |y'(τ)|² dτ，默认用 Gauss–Legendre"""
        if t >= t0:
            return 0.0
        return gauss_interval(self.speed_squared, t, t0, nodes or settings.quadrature.path_nodes)


@dataclass(frozen=True)
class ConstantPath(CentrePath):
    point: tuple[float, ...]
    label: str = "constant"

    @property
    def dim(self) -> int:
        return len(self.point)

    def position(self, t: float) -> np.ndarray:
        return np.asarray(self.point, dtype=float)

    def velocity(self, t: float) -> np.ndarray:
        return np.zeros(self.dim)

    def energy(self, t: float, t0: float, nodes: Optional[int] = None) -> float:
        return 0.0


@dataclass(frozen=True)
class LinePath(CentrePath):
    """y(t) = x0 + (t0 - t) y0"""
    x0: tuple[float, ...]
    y0: tuple[float, ...]
    t0: float = 0.0
    label: str = "line"

    @property
    def dim(self) -> int:
        return len(self.x0)

    def position(self, t: float) -> np.ndarray:
        return np.asarray(self.x0, dtype=float) + (self.t0 - t) * np.asarray(self.y0, dtype=float)

    def velocity(self, t: float) -> np.ndarray:
        return -np.asarray(self.y0, dtype=float)

    def energy(self, t: float, t0: float, nodes: Optional[int] = None) -> float:
        return float(np.dot(self.y0, self.y0)) * max(t0 - t, 0.0)


@dataclass(frozen=True)
class CirclePath(CentrePath):
    """y(t) = ε(cos t, sin t, 0, …)"""
    eps: float
    ambient: int = 3
    label: str = "circle"

    @property
    def dim(self) -> int:
        return self.ambient

    def position(self, t: float) -> np.ndarray:
        out = np.zeros(self.ambient)
        out[:2] = self.eps * np.array([np.cos(t), np.sin(t)])
        return out

    def velocity(self, t: float) -> np.ndarray:
        out = np.zeros(self.ambient)
        out[:2] = self.eps * np.array([-np.sin(t), np.cos(t)])
        return out


@dataclass(frozen=True)
class ParabolaPath(CentrePath):
    """y(t) = ε(t, t², 0, …)"""
    eps: float
    ambient: int = 3
    label: str = "parabola"

    @property
    def dim(self) -> int:
        return self.ambient

    def position(self, t: float) -> np.ndarray:
        out = np.zeros(self.ambient)
        out[:2] = self.eps * np.array([t, t * t])
        return out

    def velocity(self, t: float) -> np.ndarray:
        out = np.zeros(self.ambient)
        out[:2] = self.eps * np.array([1.0, 2.0 * t])
        return out


# ========= 平均曲率流 =========

Surface = Union[ParametricPatch, PlaneSurface, CylinderSurface]


class FlowSolution(ABC):
    """∂_t x = H⃗ 的闭式解；t0 为自相似收缩的奇异时刻（静态解取 +inf）"""
    label: str
    k: int
    n: int
    t0: float

    @abstractmethod
    def surface(self, t: float) -> Surface: ...

    @abstractmethod
    def velocity(self, t: float, u: np.ndarray) -> np.ndarray:
        """∂_t embed_t(u)"""

    def check_time(self, t: float) -> None:
        if not t < self.t0:
            raise DomainError(f"flow {self.label!r} is only defined for t < {self.t0}, got t={t}")


@dataclass(frozen=True)
class StaticPlaneFlow(FlowSolution):
    point: tuple[float, ...] = (0.0, 0.0, 0.0)
    normal: tuple[float, ...] = (0.0, 0.0, 1.0)
    label: str = "plane"
    k: int = 2
    n: int = 3
    t0: float = np.inf

    def surface(self, t: float) -> PlaneSurface:
        return PlaneSurface(point=self.point, normal=self.normal, label=self.label)

    def velocity(self, t: float, u: np.ndarray) -> np.ndarray:
        return np.zeros((as_points(u, self.k).shape[0], self.n))


@dataclass(frozen=True)
class ShrinkingSphereFlow(FlowSolution):
    """半径 √(2k(t0-t)) 的收缩球面（k=1 为 R² 中的圆，k=2 为 R³ 中的球面）"""
    centre: tuple[float, ...] = (0.0, 0.0, 0.0)
    t0: float = 0.0
    k: int = 2
    label: str = "sphere"

    @property
    def n(self) -> int:
        return self.k + 1

    def radius(self, t: float) -> float:
        self.check_time(t)
        return float(np.sqrt(2.0 * self.k * (self.t0 - t)))

    def surface(self, t: float) -> ParametricPatch:
        c = real_vec(self.centre, self.n)
        if self.k == 1:
            return circle(c, self.radius(t), label=self.label)
        if self.k == 2:
            return sphere(c, self.radius(t), label=self.label)
        raise DomainError(f"shrinking spheres are catalogued for k in (1, 2), got {self.k}")

    def velocity(self, t: float, u: np.ndarray) -> np.ndarray:
        r = self.radius(t)
        patch = self.surface(t)
        x = patch.embed(u)
        # R' = -k/R，沿径向
        return (-self.k / r) * (x - np.asarray(self.centre, dtype=float)) / r


@dataclass(frozen=True)
class ShrinkingCylinderFlow(FlowSolution):
    """S¹(√(2(t0-t))) × R，轴为 e₃"""
    base: tuple[float, ...] = (0.0, 0.0, 0.0)
    t0: float = 0.0
    label: str = "cylinder"
    k: int = 2
    n: int = 3

    def radius(self, t: float) -> float:
        self.check_time(t)
        return float(np.sqrt(2.0 * (self.t0 - t)))

    def surface(self, t: float) -> CylinderSurface:
        return CylinderSurface(radius=self.radius(t), base=self.base, label=self.label)

    def velocity(self, t: float, u: np.ndarray) -> np.ndarray:
        uu = as_points(u, 2)
        r = self.radius(t)
        th = uu[:, 0]
        return (-1.0 / r) * np.stack([np.cos(th), np.sin(th), np.zeros_like(th)], axis=1)


# ========= 高斯权重 =========

def tail_radius(tau: float) -> float:
    """exp(-R²/4τ) = GAUSSIAN_TAIL 时的半径 √(4τ ln(1/tail))"""
    return float(np.sqrt(4.0 * tau * np.log(1.0 / GAUSSIAN_TAIL)))


@dataclass(frozen=True)
class GaussianWeight:
    """Φ_{y(t),t0}(x,t) = (4π(t0-t))^{-k/2} exp(-|x-y(t)|²/(4(t0-t)))"""
    k: int
    t0: float
    path: CentrePath

    def tau(self, t: float) -> float:
        tau = self.t0 - t
        if not tau > 0:
            raise DomainError(f"Gaussian weight is only evaluated for t < t0={self.t0}, got t={t}")
        return tau

    def centre(self, t: float) -> np.ndarray:
        return self.path.position(t)

    def __call__(self, x: np.ndarray, t: float) -> np.ndarray:
        return gaussian_rho(x, self.centre(t), self.tau(t), self.k)


def gaussian_rho(x: np.ndarray, x0: np.ndarray, scale: float, k: int) -> np.ndarray:
    """ρ_{x0,scale}(x) = (4π scale)^{-k/2} exp(-|x-x0|²/(4 scale))"""
    d = np.asarray(x, dtype=float) - np.asarray(x0, dtype=float)
    return (4.0 * np.pi * scale) ** (-0.5 * k) * np.exp(-np.sum(d * d, axis=-1) / (4.0 * scale))
