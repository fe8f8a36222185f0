# encoding: utf-8
"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/15 上午11:05
@desc: 映射目录：平稳 p-调和映射（常值、线性、径向投影 x/|x|）、平坦目标上的调和映射热流
       （零解、静态线性、热核）、热流高斯权重，以及平稳性自检所用的多项式向量场。

       梯度统一存为 (N, m, n)，分量 [i, α] = ∂_i u^α。
"""
from __future__ import annotations

import itertools
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional

import numpy as np
from loguru import logger

from app.core.consts import CRITICAL_GRADIENT
from app.core.exceptions import DomainError
from app.models.flows import CentrePath, gaussian_rho
from app.models.patch import as_points


def gradient_power(norm2: np.ndarray, exponent: float) -> np.ndarray:
    """
    |∇u|^exponent，输入为 |∇u|²。
    exponent < 0（p < 2 时的 |∇u|^{p-2}）在临界集 |∇u| < 1e-14 上按约定取 0。
    """
    norm2 = np.asarray(norm2, dtype=float)
    if exponent >= 0:
        return norm2 ** (0.5 * exponent)
    out = np.zeros_like(norm2)
    live = norm2 > CRITICAL_GRADIENT ** 2
    out[live] = norm2[live] ** (0.5 * exponent)
    return out


def contract(grad: np.ndarray, v: np.ndarray) -> np.ndarray:
    """v·∇u = Σ_i v_i ∂_i u ∈ R^n"""
    return np.einsum("ni,nia->na", np.broadcast_to(v, grad.shape[:2]), grad)


# ========= 平稳 p-调和映射 =========

class MapSolution(ABC):
    m: int
    n: int
    p: float
    label: str
    # |∇u| ~ |x|^{-σ} 在原点附近的奇性阶
    singular_order: int = 0
    stationary: bool = True
    # u(λx) = u(x)
    homogeneous_degree_zero: bool = False

    @abstractmethod
    def value(self, x: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def gradient(self, x: np.ndarray) -> np.ndarray: ...

    def grad_norm2(self, x: np.ndarray) -> np.ndarray:
        g = self.gradient(x)
        return np.sum(g * g, axis=(1, 2))

    def energy_density(self, x: np.ndarray) -> np.ndarray:
        """|∇u|^p"""
        return gradient_power(self.grad_norm2(x), self.p)

    def check_exponent(self) -> None:
        if not 1.0 < self.p < self.m:
            raise DomainError(f"p must lie in (1, m) = (1, {self.m}), got p={self.p}")


@dataclass(frozen=True)
class ConstantMap(MapSolution):
    m: int = 3
    target: tuple[float, ...] = (0.0, 0.0, 1.0)
    p: float = 2.0
    label: str = "constant"
    homogeneous_degree_zero: bool = True

    @property
    def n(self) -> int:
        return len(self.target)

    def value(self, x: np.ndarray) -> np.ndarray:
        xx = as_points(x, self.m)
        return np.broadcast_to(np.asarray(self.target, dtype=float), (xx.shape[0], self.n)).copy()

    def gradient(self, x: np.ndarray) -> np.ndarray:
        return np.zeros((as_points(x, self.m).shape[0], self.m, self.n))


@dataclass(frozen=True)
class LinearMap(MapSolution):
    """u(x) = A x 到平坦目标 R^n，A 为 n×m"""
    matrix: tuple[tuple[float, ...], ...] = ((1.0, 0.0, 0.0), (0.0, 2.0, 0.0))
    p: float = 2.0
    label: str = "linear"

    @property
    def A(self) -> np.ndarray:
        return np.asarray(self.matrix, dtype=float)

    @property
    def m(self) -> int:
        return self.A.shape[1]

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def value(self, x: np.ndarray) -> np.ndarray:
        return as_points(x, self.m) @ self.A.T

    def gradient(self, x: np.ndarray) -> np.ndarray:
        return np.broadcast_to(self.A.T, (as_points(x, self.m).shape[0], self.m, self.n)).copy()


@dataclass(frozen=True)
class RadialMap(MapSolution):
    """u(x) = x/|x| : R^m \\ {0} → S^{m-1}，|∇u|² = (m-1)/|x|²"""
    m: int = 3
    p: float = 2.0
    label: str = "radial"
    singular_order: int = 1
    homogeneous_degree_zero: bool = True

    @property
    def n(self) -> int:
        return self.m

    def value(self, x: np.ndarray) -> np.ndarray:
        xx = as_points(x, self.m)
        return xx / np.linalg.norm(xx, axis=1, keepdims=True)

    def gradient(self, x: np.ndarray) -> np.ndarray:
        xx = as_points(x, self.m)
        r = np.linalg.norm(xx, axis=1)
        eye = np.eye(self.m)[None, :, :]
        return eye / r[:, None, None] - np.einsum("ni,na->nia", xx, xx) / (r ** 3)[:, None, None]


# ========= 多项式向量场 =========

@dataclass(frozen=True, eq=False)
class PolynomialField:
    """X_j(x) = Σ_M coeffs[M, j] x^{exponents[M]}"""
    exponents: np.ndarray  # (M, m) 非负整数
    coeffs: np.ndarray  # (M, m)

    @property
    def m(self) -> int:
        return int(self.exponents.shape[1])

    @classmethod
    def identity(cls, m: int) -> "PolynomialField":
        return cls(exponents=np.eye(m, dtype=int), coeffs=np.eye(m))

    @classmethod
    def random(cls, m: int, degree: int, rng: np.random.Generator) -> "PolynomialField":
        exps = np.array([e for e in itertools.product(range(degree + 1), repeat=m) if sum(e) <= degree], dtype=int)
        return cls(exponents=exps, coeffs=rng.uniform(-1.0, 1.0, size=(exps.shape[0], m)))

    def _monomials(self, x: np.ndarray) -> np.ndarray:
        return np.prod(x[:, None, :] ** self.exponents[None, :, :], axis=2)

    def value(self, x: np.ndarray) -> np.ndarray:
        return self._monomials(as_points(x, self.m)) @ self.coeffs

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        """(N, m, m)，[i, j] = ∂_i X_j"""
        xx = as_points(x, self.m)
        out = np.empty((xx.shape[0], self.m, self.m))
        for i in range(self.m):
            e = self.exponents[:, i]
            lowered = self.exponents.copy()
            lowered[:, i] = np.maximum(e - 1, 0)
            mono = np.prod(xx[:, None, :] ** lowered[None, :, :], axis=2) * e[None, :]
            out[:, i, :] = mono @ self.coeffs
        return out

    def divergence(self, x: np.ndarray) -> np.ndarray:
        return np.trace(self.jacobian(x), axis1=1, axis2=2)


# ========= 调和映射热流（平坦目标） =========

class HeatFlowSolution(ABC):
    m: int
    n: int
    label: str
    t_min: float = -np.inf

    @abstractmethod
    def value(self, x: np.ndarray, t: float) -> np.ndarray: ...

    @abstractmethod
    def gradient(self, x: np.ndarray, t: float) -> np.ndarray: ...

    @abstractmethod
    def time_derivative(self, x: np.ndarray, t: float) -> np.ndarray: ...

    @abstractmethod
    def laplacian(self, x: np.ndarray, t: float) -> np.ndarray: ...

    def gradient_bound(self, t: float) -> float:
        """sup |∇u(·,t)|；没有有限上界的解不能参与加权积分"""
        return np.inf

    def gaussian_focus(self, t: float) -> Optional[tuple[np.ndarray, float]]:
        """|∇u|²、|∂_t u|² 等二次量带高斯因子 exp(-|x-c|²/(4κ)) 时返回 (c, κ)"""
        return None

    def check_time(self, t: float) -> None:
        if not t > self.t_min:
            raise DomainError(f"heat flow {self.label!r} is defined for t > {self.t_min}, got t={t}")

    def grad_norm2(self, x: np.ndarray, t: float) -> np.ndarray:
        g = self.gradient(x, t)
        return np.sum(g * g, axis=(1, 2))


@dataclass(frozen=True)
class ZeroFlow(HeatFlowSolution):
    m: int = 3
    n: int = 1
    label: str = "zero"

    def value(self, x: np.ndarray, t: float) -> np.ndarray:
        return np.zeros((as_points(x, self.m).shape[0], self.n))

    def gradient(self, x: np.ndarray, t: float) -> np.ndarray:
        return np.zeros((as_points(x, self.m).shape[0], self.m, self.n))

    def time_derivative(self, x: np.ndarray, t: float) -> np.ndarray:
        return self.value(x, t)

    def laplacian(self, x: np.ndarray, t: float) -> np.ndarray:
        return self.value(x, t)

    def gradient_bound(self, t: float) -> float:
        return 0.0


@dataclass(frozen=True)
class StaticLinearFlow(HeatFlowSolution):
    """u(x,t) = ⟨a, x⟩"""
    a: tuple[float, ...] = (1.0, 0.5, -0.25)
    label: str = "linear"
    n: int = 1

    @property
    def m(self) -> int:
        return len(self.a)

    def value(self, x: np.ndarray, t: float) -> np.ndarray:
        return (as_points(x, self.m) @ np.asarray(self.a, dtype=float))[:, None]

    def gradient(self, x: np.ndarray, t: float) -> np.ndarray:
        xx = as_points(x, self.m)
        return np.broadcast_to(np.asarray(self.a, dtype=float)[None, :, None], (xx.shape[0], self.m, 1)).copy()

    def time_derivative(self, x: np.ndarray, t: float) -> np.ndarray:
        return np.zeros((as_points(x, self.m).shape[0], 1))

    def laplacian(self, x: np.ndarray, t: float) -> np.ndarray:
        return self.time_derivative(x, t)

    def gradient_bound(self, t: float) -> float:
        return float(np.linalg.norm(self.a))


@dataclass(frozen=True)
class HeatKernelFlow(HeatFlowSolution):
    """u(x,t) = H(x, t - t_s) = (4πσ)^{-m/2} exp(-|x|²/(4σ))，σ = t - t_s"""
    m: int = 3
    t_start: float = -1.0
    label: str = "heat-kernel"
    n: int = 1

    @property
    def t_min(self) -> float:
        return self.t_start

    def _sigma(self, t: float) -> float:
        self.check_time(t)
        return t - self.t_start

    def value(self, x: np.ndarray, t: float) -> np.ndarray:
        sg = self._sigma(t)
        xx = as_points(x, self.m)
        return ((4.0 * np.pi * sg) ** (-0.5 * self.m) * np.exp(-np.sum(xx * xx, axis=1) / (4.0 * sg)))[:, None]

    def gradient(self, x: np.ndarray, t: float) -> np.ndarray:
        sg = self._sigma(t)
        xx = as_points(x, self.m)
        return (-xx / (2.0 * sg) * self.value(xx, t))[:, :, None]

    def time_derivative(self, x: np.ndarray, t: float) -> np.ndarray:
        sg = self._sigma(t)
        xx = as_points(x, self.m)
        r2 = np.sum(xx * xx, axis=1)
        return self.value(xx, t) * (-0.5 * self.m / sg + r2 / (4.0 * sg * sg))[:, None]

    def laplacian(self, x: np.ndarray, t: float) -> np.ndarray:
        sg = self._sigma(t)
        xx = as_points(x, self.m)
        r2 = np.sum(xx * xx, axis=1)
        u = self.value(xx, t)[:, 0]
        return (u * (r2 / (4.0 * sg * sg) - self.m / (2.0 * sg)))[:, None]

    def gradient_bound(self, t: float) -> float:
        sg = self._sigma(t)
        # max_r r/(2σ) H 在 r = √(2σ) 处取到
        r = np.sqrt(2.0 * sg)
        return float(r / (2.0 * sg) * (4.0 * np.pi * sg) ** (-0.5 * self.m) * np.exp(-0.5))

    def gaussian_focus(self, t: float) -> Optional[tuple[np.ndarray, float]]:
        # H² ∝ exp(-|x|²/(2σ))
        return np.zeros(self.m), 0.5 * self._sigma(t)


@dataclass(frozen=True)
class HeatWeight:
    """Φ_{y(t),t0}(x,t) = (4π(t0-t))^{-(m-2)/2} exp(-|x-y(t)|²/(4(t0-t)))"""
    m: int
    t0: float
    path: CentrePath

    def __post_init__(self) -> None:
        if self.m < 2:
            raise DomainError(f"heat-flow weights need m >= 2, got m={self.m}")
        if self.m == 2:
            logger.warning("heat-flow weight with m=2 has exponent 0 and is experimental")

    def tau(self, t: float) -> float:
        tau = self.t0 - t
        if not tau > 0:
            raise DomainError(f"heat weight is only evaluated for t < t0={self.t0}, got t={t}")
        return tau

    def centre(self, t: float) -> np.ndarray:
        return self.path.position(t)

    def __call__(self, x: np.ndarray, t: float) -> np.ndarray:
        return gaussian_rho(x, self.centre(t), self.tau(t), self.m - 2)
