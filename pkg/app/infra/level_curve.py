# encoding: utf-8
"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/14 下午2:40
@desc: 二维参数域上的水平曲线 {φ = c}：marching squares 提取折线，Newton 投影到水平集，
       再把每段看作其弦上的图做 Gauss 线积分（节点沿弦法向投影，速度由隐函数求导给出）。
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from loguru import logger

from app.core.consts import LEVEL_RESIDUAL, REGULAR_VALUE_FLOOR
from app.core.exceptions import RegularValueError
from app.infra.implicit_quadrature import ParamLevel
from app.infra.quadrature import gauss_legendre01

# 每个 case 对应的 (边, 边) 线段；边 0:c0-c1, 1:c1-c2, 2:c2-c3, 3:c3-c0
_CASES: dict[int, tuple[tuple[int, int], ...]] = {
    1: ((3, 0),), 2: ((0, 1),), 3: ((3, 1),), 4: ((1, 2),),
    6: ((0, 2),), 7: ((2, 3),), 8: ((2, 3),), 9: ((0, 2),),
    11: ((1, 2),), 12: ((1, 3),), 13: ((0, 1),), 14: ((3, 0),),
}
# 鞍点 case：按中心点是否高于水平值选择连接方式
_SADDLE = {
    5: {True: ((0, 1), (2, 3)), False: ((3, 0), (1, 2))},
    10: {True: ((3, 0), (1, 2)), False: ((0, 1), (2, 3))},
}
_EDGE_CORNERS = ((0, 1), (1, 2), (2, 3), (3, 0))
_CORNER_OFFSETS = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)

_NEWTON_ITERS = 40
_MAX_SPLITS = 8
# 弦法向与梯度夹角的容许下限（|∇φ·n| ≥ 该比例 × |∇φ|）
_CHORD_CONDITION = 0.25

DensityFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class LevelPolyline:
    segments: np.ndarray  # (S, 2, 2) 参数空间端点
    level: float

    @property
    def size(self) -> int:
        return int(self.segments.shape[0])


def project_to_level(level: ParamLevel, u: np.ndarray, target: float) -> np.ndarray:
    """沿梯度方向 Newton 投影到 φ = target。"""
    u = np.array(u, dtype=float, copy=True)
    if u.shape[0] == 0:
        return u
    tol = 1e-13 * (1.0 + abs(target))
    for _ in range(_NEWTON_ITERS):
        val, grad = level.value_and_gradient(u)
        res = val - target
        if np.all(np.abs(res) <= tol):
            break
        g2 = np.sum(grad * grad, axis=1)
        if np.any(g2 <= REGULAR_VALUE_FLOOR ** 2):
            raise RegularValueError(f"level {target:.6g} is not a regular value: vanishing gradient")
        u -= (res / g2)[:, None] * grad
    val, grad = level.value_and_gradient(u)
    if np.any(np.abs(val - target) > LEVEL_RESIDUAL * (1.0 + abs(target))):
        raise RegularValueError(f"Newton projection onto level {target:.6g} did not converge",
                                data={"max_residual": float(np.max(np.abs(val - target)))})
    return u


def extract_level_polyline(level: ParamLevel, lo: np.ndarray, hi: np.ndarray, target: float,
                           grid: int, refine: int = 2) -> LevelPolyline:
    """marching squares + 端点 Newton 投影 + refine 次中点加密。"""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    h = (hi - lo) / grid
    ii, jj = np.meshgrid(np.arange(grid + 1), np.arange(grid + 1), indexing="ij")
    nodes = lo + np.stack([ii.ravel(), jj.ravel()], axis=1) * h
    values = level.value(nodes).reshape(grid + 1, grid + 1)

    c = np.stack([values[:-1, :-1], values[1:, :-1], values[1:, 1:], values[:-1, 1:]], axis=-1)
    with np.errstate(invalid="ignore"):
        high = c > target
    case = high[..., 0] + 2 * high[..., 1] + 4 * high[..., 2] + 8 * high[..., 3]
    cut = np.argwhere((case != 0) & (case != 15) & np.isfinite(c).all(axis=-1))

    saddle_cells = [tuple(ij) for ij in cut if case[tuple(ij)] in _SADDLE]
    centre_high: dict[tuple[int, int], bool] = {}
    if saddle_cells:
        centres = lo + (np.array(saddle_cells, dtype=float) + 0.5) * h
        for ij, v in zip(saddle_cells, level.value(centres)):
            centre_high[ij] = bool(v > target)

    segments = []
    for i, j in cut:
        cs = int(case[i, j])
        corner_vals = c[i, j]
        corner_pts = lo + (np.array([i, j], dtype=float) + _CORNER_OFFSETS) * h
        pairs = _SADDLE[cs][centre_high[(i, j)]] if cs in _SADDLE else _CASES[cs]
        for e_a, e_b in pairs:
            ends = []
            for e in (e_a, e_b):
                a, b = _EDGE_CORNERS[e]
                va, vb = corner_vals[a], corner_vals[b]
                t = 0.5 if vb == va else (target - va) / (vb - va)
                ends.append(corner_pts[a] + np.clip(t, 0.0, 1.0) * (corner_pts[b] - corner_pts[a]))
            segments.append(ends)

    if not segments:
        return LevelPolyline(segments=np.zeros((0, 2, 2)), level=target)

    seg = np.array(segments, dtype=float)
    flat = project_to_level(level, seg.reshape(-1, 2), target)
    seg = flat.reshape(-1, 2, 2)
    for _ in range(refine):
        seg = _split(level, seg, target)
    seg = seg[np.linalg.norm(seg[:, 1] - seg[:, 0], axis=1) > 1e-14]
    logger.debug(f"level polyline | level={target:.6g} grid={grid} segments={seg.shape[0]}")
    return LevelPolyline(segments=seg, level=target)


def _split(level: ParamLevel, seg: np.ndarray, target: float) -> np.ndarray:
    mid = project_to_level(level, 0.5 * (seg[:, 0] + seg[:, 1]), target)
    first = np.stack([seg[:, 0], mid], axis=1)
    second = np.stack([mid, seg[:, 1]], axis=1)
    return np.concatenate([first, second], axis=0)


def _chord_nodes(level: ParamLevel, seg: np.ndarray, target: float, order: int):
    """
    在每段弦的 Gauss 节点上沿弦法向 Newton 投影到水平集。
    返回 (投影点, dγ/dτ, 权重, 每段是否良态)。
    """
    x, w = gauss_legendre01(order)
    n_s = seg.shape[0]
    d = seg[:, 1] - seg[:, 0]
    length = np.linalg.norm(d, axis=1)
    nrm = np.stack([-d[:, 1], d[:, 0]], axis=1) / length[:, None]

    base = (seg[:, 0][:, None, :] + x[None, :, None] * d[:, None, :]).reshape(-1, 2)
    nn = np.repeat(nrm, order, axis=0)
    dd = np.repeat(d, order, axis=0)
    lam = np.zeros(base.shape[0])
    tol = 1e-13 * (1.0 + abs(target))
    for _ in range(_NEWTON_ITERS):
        val, grad = level.value_and_gradient(base + lam[:, None] * nn)
        res = val - target
        if np.all(np.abs(res) <= tol):
            break
        slope = np.sum(grad * nn, axis=1)
        step = np.where(np.abs(slope) > 1e-300, res / np.where(slope == 0, 1.0, slope), 0.0)
        lam -= step
    pts = base + lam[:, None] * nn
    val, grad = level.value_and_gradient(pts)
    gnorm = np.linalg.norm(grad, axis=1)
    if np.any(gnorm <= REGULAR_VALUE_FLOOR):
        raise RegularValueError(f"level {target:.6g} is not a regular value",
                                data={"min_gradient": float(np.min(gnorm))})
    slope = np.sum(grad * nn, axis=1)
    good_node = (np.abs(slope) >= _CHORD_CONDITION * gnorm) \
        & (np.abs(val - target) <= LEVEL_RESIDUAL * (1.0 + abs(target)))
    good = good_node.reshape(n_s, order).all(axis=1)
    dlam = -np.sum(grad * dd, axis=1) / np.where(slope == 0, 1.0, slope)
    tangent = dd + dlam[:, None] * nn
    return pts, tangent, np.tile(w, n_s), good


def integrate_polyline(level: ParamLevel, polyline: LevelPolyline, density: DensityFn, order: int) -> float:
    """
    ∫ density 沿水平曲线；density(u, dγ/dτ) 返回被积函数乘以诱导弧长速度。
    弦条件不满足的段自动对分重试。
    """
    seg = polyline.segments
    total = 0.0
    for _ in range(_MAX_SPLITS + 1):
        if seg.shape[0] == 0:
            return total
        pts, tangent, wts, good = _chord_nodes(level, seg, polyline.level, order)
        node_good = np.repeat(good, order)
        if np.any(node_good):
            vals = np.asarray(density(pts[node_good], tangent[node_good]), dtype=float)
            total += float(np.sum(wts[node_good] * vals))
        seg = seg[~good]
        if seg.shape[0]:
            seg = _split(level, seg, polyline.level)
    raise RegularValueError(f"level curve {polyline.level:.6g} could not be resolved by chord graphs",
                            data={"segments_left": int(seg.shape[0])})
