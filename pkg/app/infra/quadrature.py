# encoding: utf-8
"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/13 下午6:02
@desc: 基础求积规则：[0,1] 上的 Gauss–Legendre / Gauss–Jacobi、张量积规则、
       Gauss–Hermite、高维球面乘积规则，以及轴对齐盒子（含边界面）上的张量 Gauss 积分。
       规则按 (order, dim) 缓存，返回只读数组。
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Callable

import numpy as np
from numpy.polynomial.hermite import hermgauss
from numpy.polynomial.legendre import leggauss
from scipy.special import roots_jacobi

# 单批最多评估的点数，避免三维张量规则一次性占用过多内存
_BATCH = 200_000


def _frozen(*arrays: np.ndarray) -> tuple[np.ndarray, ...]:
    for a in arrays:
        a.setflags(write=False)
    return arrays


@lru_cache(maxsize=None)
def gauss_legendre01(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss–Legendre nodes and weights mapped to [0,1]."""
    xi, w = leggauss(int(order))
    return _frozen(0.5 * (xi + 1.0), 0.5 * w)


@lru_cache(maxsize=None)
def tensor_rule01(order: int, dim: int) -> tuple[np.ndarray, np.ndarray]:
    """[0,1]^dim 上的张量积 Gauss 规则，dim=0 时退化为单点权重 1。"""
    if dim == 0:
        return _frozen(np.zeros((1, 0)), np.ones(1))
    x, w = gauss_legendre01(order)
    pts = np.array(list(itertools.product(x, repeat=dim)), dtype=float)
    wts = np.prod(np.array(list(itertools.product(w, repeat=dim)), dtype=float), axis=1)
    return _frozen(pts, wts)


@lru_cache(maxsize=None)
def corners01(dim: int) -> np.ndarray:
    return _frozen(np.array(list(itertools.product((0.0, 1.0), repeat=dim)), dtype=float))[0]


@lru_cache(maxsize=None)
def gauss_jacobi01(order: int, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """
    ∫_0^1 t^beta g(t) dt 的 Gauss–Jacobi 规则（beta > -1）。
    beta 为 0 时即 Gauss–Legendre。
    """
    if abs(beta) < 1e-15:
        return gauss_legendre01(order)
    x, w = roots_jacobi(int(order), 0.0, float(beta))
    return _frozen(0.5 * (x + 1.0), w * 2.0 ** (-beta - 1.0))


@lru_cache(maxsize=None)
def hermite_rule(order: int, dim: int) -> tuple[np.ndarray, np.ndarray]:
    """∫_{R^dim} g(ξ) exp(-|ξ|²) dξ 的张量 Gauss–Hermite 规则。"""
    x, w = hermgauss(int(order))
    pts = np.array(list(itertools.product(x, repeat=dim)), dtype=float)
    wts = np.prod(np.array(list(itertools.product(w, repeat=dim)), dtype=float), axis=1)
    return _frozen(pts, wts)


@lru_cache(maxsize=None)
def sphere_rule(m: int, n_theta: int, n_phi: int) -> tuple[np.ndarray, np.ndarray]:
    """
    单位球面 S^{m-1} ⊂ R^m 的乘积规则：
      - 方位角 φ 用周期梯形公式（对周期光滑函数谱收敛）
      - 极角 θ_1..θ_{m-2} 用 [0,π] 上的 Gauss–Legendre，节点不落在极点上
    权重之和等于 |S^{m-1}|。
    """
    if m < 2:
        raise ValueError(f"sphere_rule needs m >= 2, got {m}")
    phi = 2.0 * np.pi * (np.arange(n_phi) + 0.5) / n_phi
    w_phi = np.full(n_phi, 2.0 * np.pi / n_phi)
    if m == 2:
        return _frozen(np.column_stack([np.cos(phi), np.sin(phi)]), w_phi.copy())

    t01, wt01 = gauss_legendre01(n_theta)
    theta, w_theta = np.pi * t01, np.pi * wt01
    grids = np.meshgrid(*([theta] * (m - 2)), phi, indexing="ij")
    angles = [g.ravel() for g in grids]
    wgrids = np.meshgrid(*([w_theta] * (m - 2)), w_phi, indexing="ij")
    weights = np.prod(np.stack([g.ravel() for g in wgrids]), axis=0)

    n = angles[0].size
    omega = np.empty((n, m))
    sin_prod = np.ones(n)
    for j in range(m - 2):
        omega[:, j] = sin_prod * np.cos(angles[j])
        # 体积元 sin^{m-2-j} θ_{j+1}
        weights = weights * np.sin(angles[j]) ** (m - 2 - j)
        sin_prod = sin_prod * np.sin(angles[j])
    omega[:, m - 2] = sin_prod * np.cos(angles[-1])
    omega[:, m - 1] = sin_prod * np.sin(angles[-1])
    return _frozen(omega, weights)


def box_cells(lo: np.ndarray, hi: np.ndarray, cells: int) -> tuple[np.ndarray, np.ndarray]:
    """把盒子均分为 cells^dim 个单元，返回 (单元下角 (C,d), 单元宽度 (d,))。"""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    h = (hi - lo) / cells
    idx = np.array(list(itertools.product(range(cells), repeat=lo.size)), dtype=float).reshape(-1, lo.size)
    return lo + idx * h, h


def integrate_box(
        func: Callable[[np.ndarray], np.ndarray],
        lo: np.ndarray,
        hi: np.ndarray,
        cells: int,
        order: int,
) -> float:
    """
    轴对齐盒子上的张量 Gauss 积分，func 接收 (N,d) 点阵返回 (N,) 值。
    """
    lo = np.asarray(lo, dtype=float)
    starts, h = box_cells(lo, hi, cells)
    nodes, weights = tensor_rule01(order, lo.size)
    vol = float(np.prod(h))
    per_cell = nodes.shape[0]
    chunk = max(1, _BATCH // per_cell)
    total = 0.0
    for i in range(0, starts.shape[0], chunk):
        block = starts[i:i + chunk]
        pts = (block[:, None, :] + nodes[None, :, :] * h).reshape(-1, lo.size)
        vals = np.asarray(func(pts), dtype=float).reshape(block.shape[0], per_cell)
        total += float(np.sum(vals @ weights)) * vol
    return total


def integrate_box_faces(
        func: Callable[[np.ndarray, np.ndarray], np.ndarray],
        lo: np.ndarray,
        hi: np.ndarray,
        cells: int,
        order: int,
) -> float:
    """
    盒子边界上的面积分 Σ_faces ∫ func(x, ν) dS，ν 为外法向。
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    d = lo.size
    total = 0.0
    for axis in range(d):
        others = [j for j in range(d) if j != axis]
        for side, value in ((-1.0, lo[axis]), (1.0, hi[axis])):
            normal = np.zeros(d)
            normal[axis] = side

            def face_func(p: np.ndarray, _axis=axis, _value=value, _normal=normal, _others=others) -> np.ndarray:
                pts = np.empty((p.shape[0], d))
                pts[:, _others] = p
                pts[:, _axis] = _value
                return func(pts, np.broadcast_to(_normal, pts.shape))

            total += integrate_box(face_func, lo[others], hi[others], cells, order)
    return total


def gauss_interval(func: Callable[[np.ndarray], np.ndarray], a: float, b: float, order: int) -> float:
    """[a,b] 上的单段 Gauss–Legendre 积分。"""
    x, w = gauss_legendre01(order)
    t = a + (b - a) * x
    return float(np.sum(w * np.asarray(func(t), dtype=float)) * (b - a))
