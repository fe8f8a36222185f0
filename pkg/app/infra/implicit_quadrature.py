# encoding: utf-8
"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/14 上午10:15
@desc: 参数盒上带状区域 {lower < φ(u) < upper} 的自适应张量 Gauss 求积。

       单元处理流程（按层同步、全部向量化）：
         1. 以单元中心值和采样点上的梯度上界（Lipschitz 估计）判定整单元在带内/带外；
         2. 其余单元逐维选高度方向：顶层要求 φ 沿该方向单调；降一维后的函数是上一层函数
            在该方向两个对面上的限制，要在剩余方向中再找一个使它们全部单调的方向
            （与该面不相交的函数免检），直到只剩一维，最外一维不要求单调。
            找不到高度方向的单元二分细化；到达深度上限后退化为指示函数求积，
            单元测度乘以被积函数最大值计入误差界；
         3. 积分由外向内逐维进行：每一维在当前直线上求出该层全部函数的根，把区间切成若干段，
            每段上内层积分光滑，分别用 Gauss 积分；最内层按段中点判断是否在带内。
       误差界 = |I_q - I_{q-1}|（同一划分上两种阶数之差）+ 退化单元的贡献。
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Protocol

import numpy as np
from loguru import logger

from app.core.exceptions import ToleranceNotMetError
from app.infra.quadrature import corners01, gauss_legendre01, tensor_rule01
from app.schemas.quadrature import QuadratureResult, QuadratureSpec

# 单调方向判定：|∂_i φ| ≥ 该比例 × max|∇φ|
_GRAPH_RATIO = 0.2
# Lipschitz 估计的安全系数
_LIPSCHITZ_SAFETY = 1.5
_MAX_ROOT_ITER = 100
# 局部坐标 [0,1] 上的求根精度
_ROOT_TOL = 4.0 * np.finfo(float).eps
_MAX_CELLS = 400_000
# 切割单元每批最多生成的求积点数
_BATCH_POINTS = 400_000

WeightFn = Callable[[np.ndarray], np.ndarray]
LineFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


class ParamLevel(Protocol):
    """参数空间上的水平函数 φ(u)"""

    def value(self, u: np.ndarray) -> np.ndarray: ...

    def value_and_gradient(self, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]: ...


@dataclass
class _Partition:
    k: int
    inside_lo: np.ndarray
    inside_h: np.ndarray
    cut_lo: np.ndarray
    cut_h: np.ndarray
    # 局部位置 -> 全局坐标轴；末位是顶层高度方向，首位是最外层积分方向
    cut_perm: np.ndarray
    fallback_lo: np.ndarray
    fallback_h: np.ndarray
    cells: int


def _empty(k: int) -> np.ndarray:
    return np.zeros((0, k))


def _finite_targets(lower: float, upper: float) -> list[float]:
    return [float(c) for c in (lower, upper) if np.isfinite(c)]


def _height_chain(level: ParamLevel, lo: np.ndarray, h: np.ndarray, targets: list[float],
                  order: int) -> tuple[np.ndarray, np.ndarray]:
    """
    为每个单元从内到外逐层选高度方向，返回 (可用标记, perm)。
    有 ell 个自由方向的一层共 len(targets)·2^{k-ell} 个函数：φ - c 在已选方向上取下/上面。
    """
    n_c, k = lo.shape
    perm = np.tile(np.arange(k), (n_c, 1))
    ok = np.ones(n_c, dtype=bool)
    rows = np.arange(n_c)
    for ell in range(k, 1, -1):
        free = np.vstack([tensor_rule01(order, ell)[0], corners01(ell), np.full((1, ell), 0.5)])
        bits = corners01(k - ell)
        n_f, n_b = free.shape[0], bits.shape[0]
        local = np.empty((n_b, n_f, k))
        local[:, :, :ell] = free[None, :, :]
        local[:, :, ell:] = bits[:, None, :]
        local = local.reshape(-1, k)
        n_s = local.shape[0]

        inv = np.argsort(perm, axis=1)
        glob = np.take_along_axis(np.broadcast_to(local, (n_c, n_s, k)),
                                  np.broadcast_to(inv[:, None, :], (n_c, n_s, k)), axis=2)
        vals, grads = level.value_and_gradient((lo[:, None, :] + h[:, None, :] * glob).reshape(-1, k))
        vals = vals.reshape(n_c, n_b, n_f)
        grads = np.take_along_axis(grads.reshape(n_c, n_s, k),
                                   np.broadcast_to(perm[:, None, :], (n_c, n_s, k)), axis=2)
        grads = grads[:, :, :ell].reshape(n_c, n_b, n_f, ell)

        ok &= np.isfinite(vals).all(axis=(1, 2)) & np.isfinite(grads).all(axis=(1, 2, 3))
        grads = np.where(np.isfinite(grads), grads, 0.0)
        gmax = np.linalg.norm(grads, axis=3).max(axis=2)
        radius = 0.5 * np.linalg.norm(np.take_along_axis(h, perm[:, :ell], axis=1), axis=1)
        margin = _LIPSCHITZ_SAFETY * gmax * radius[:, None]
        centre = vals[:, :, -1]

        active = np.zeros((n_c, n_b), dtype=bool)
        with np.errstate(invalid="ignore"):
            for c in targets:
                active |= ~(np.abs(centre - c) > margin)
            strength = np.min(np.abs(grads), axis=2) / np.maximum(gmax, 1e-300)[:, :, None]
        mono = (np.all(grads > 0, axis=2) | np.all(grads < 0, axis=2)) & (strength >= _GRAPH_RATIO)
        usable = np.all(mono | ~active[:, :, None], axis=1)
        score = np.min(np.where(active[:, :, None], strength, np.inf), axis=1)
        score = np.where(usable, score, -1.0)
        best = np.argmax(score, axis=1)
        ok &= score[rows, best] >= 0

        last = perm[:, ell - 1].copy()
        perm[:, ell - 1] = perm[rows, best]
        perm[rows, best] = last
    return ok, perm


def _partition(level: ParamLevel, lo: np.ndarray, hi: np.ndarray, lower: float, upper: float,
               spec: QuadratureSpec) -> _Partition:
    k = lo.size
    nodes, _ = tensor_rule01(spec.order, k)
    samples = np.vstack([nodes, corners01(k), np.full((1, k), 0.5)])
    n_s = samples.shape[0]
    targets = _finite_targets(lower, upper)

    h0 = (hi - lo) / spec.cells_per_axis
    idx = np.indices((spec.cells_per_axis,) * k).reshape(k, -1).T.astype(float)
    cell_lo = lo + idx * h0
    cell_h = np.broadcast_to(h0, cell_lo.shape).copy()

    inside_lo, inside_h = [], []
    cut_lo, cut_h, cut_perm = [], [], []
    fb_lo, fb_h = [], []
    total_cells = 0

    for depth in range(spec.refinement_depth + 1):
        n_c = cell_lo.shape[0]
        if n_c == 0:
            break
        total_cells += n_c
        pts = (cell_lo[:, None, :] + cell_h[:, None, :] * samples[None, :, :]).reshape(-1, k)
        vals, grads = level.value_and_gradient(pts)
        vals = vals.reshape(n_c, n_s)
        grads = grads.reshape(n_c, n_s, k)

        finite = np.isfinite(vals).all(axis=1) & np.isfinite(grads).all(axis=(1, 2))
        gnorm = np.linalg.norm(np.where(np.isfinite(grads), grads, 0.0), axis=2)
        gmax = gnorm.max(axis=1)
        margin = _LIPSCHITZ_SAFETY * gmax * 0.5 * np.linalg.norm(cell_h, axis=1)
        centre = vals[:, -1]

        with np.errstate(invalid="ignore"):
            inside = finite & (centre - margin > lower) & (centre + margin < upper)
            outside = finite & ((centre - margin >= upper) | (centre + margin <= lower))
            # 含非有限值（叶状区域之外记为 +inf）的单元：采样全在带外则视为带外
            outside |= ~finite & (np.all(vals >= upper, axis=1) | np.all(vals <= lower, axis=1))
        candidate = ~(inside | outside)

        inside_lo.append(cell_lo[inside])
        inside_h.append(cell_h[inside])

        cand_idx = np.flatnonzero(candidate)
        if cand_idx.size == 0:
            break
        ok, perm = _height_chain(level, cell_lo[cand_idx], cell_h[cand_idx], targets, spec.order)
        cut_lo.append(cell_lo[cand_idx[ok]])
        cut_h.append(cell_h[cand_idx[ok]])
        cut_perm.append(perm[ok])

        rest = cand_idx[~ok]
        if rest.size == 0:
            cell_lo = _empty(k)
            break
        if depth == spec.refinement_depth or rest.size * 2 ** k > _MAX_CELLS:
            fb_lo.append(cell_lo[rest])
            fb_h.append(cell_h[rest])
            cell_lo = _empty(k)
            break
        half = cell_h[rest] * 0.5
        kids = cell_lo[rest][:, None, :] + corners01(k)[None, :, :] * half[:, None, :]
        cell_lo = kids.reshape(-1, k)
        cell_h = np.repeat(half, 2 ** k, axis=0)

    def cat(parts: list) -> np.ndarray:
        return np.concatenate(parts) if parts else _empty(k)

    return _Partition(
        k=k,
        inside_lo=cat(inside_lo), inside_h=cat(inside_h),
        cut_lo=cat(cut_lo), cut_h=cat(cut_h),
        cut_perm=np.concatenate(cut_perm) if cut_perm else np.zeros((0, k), dtype=int),
        fallback_lo=cat(fb_lo), fallback_h=cat(fb_h),
        cells=total_cells,
    )


def _illinois(fn: LineFn, a: np.ndarray, b: np.ndarray, fa: np.ndarray, fb: np.ndarray) -> np.ndarray:
    """向量化 Illinois 法求根，要求 fa·fb < 0；fn(idx, t) 返回第 idx 行在 t 处的值。"""
    a, b, fa, fb = a.copy(), b.copy(), fa.copy(), fb.copy()
    for _ in range(_MAX_ROOT_ITER):
        idx = np.flatnonzero(np.abs(b - a) > _ROOT_TOL)
        if idx.size == 0:
            break
        ai, bi, fai, fbi = a[idx], b[idx], fa[idx], fb[idx]
        with np.errstate(divide="ignore", invalid="ignore"):
            x = bi - fbi * (bi - ai) / (fbi - fai)
        inside = np.isfinite(x) & (x > np.minimum(ai, bi)) & (x < np.maximum(ai, bi))
        x = np.where(inside, x, 0.5 * (ai + bi))
        fx = fn(idx, x)
        with np.errstate(invalid="ignore"):
            flip = fx * fbi < 0
        a[idx] = np.where(flip, bi, ai)
        fa[idx] = np.where(flip, fbi, 0.5 * fai)
        b[idx] = x
        fb[idx] = fx
        zero = fx == 0
        a[idx[zero]] = x[zero]
    return b


def _single_roots(fn: LineFn, n: int) -> tuple[np.ndarray, np.ndarray]:
    """沿单调方向：两端异号的行各有一个根"""
    rows = np.arange(n)
    f0 = fn(rows, np.zeros(n))
    f1 = fn(rows, np.ones(n))
    with np.errstate(invalid="ignore"):
        cross = np.flatnonzero(f0 * f1 < 0)
    roots = _illinois(lambda i, t: fn(cross[i], t), np.zeros(cross.size), np.ones(cross.size),
                      f0[cross], f1[cross])
    return cross, roots


def _all_roots(fn: LineFn, slope: LineFn, n: int, intervals: int) -> tuple[np.ndarray, np.ndarray]:
    """
    最外一维不要求单调：等距采样找变号区间；
    区间两端同号而导数异号时先求极值点，极值越过零则两侧各有一个根。
    """
    t = np.linspace(0.0, 1.0, intervals + 1)
    grid_rows = np.repeat(np.arange(n), t.size)
    grid_t = np.tile(t, n)
    f = fn(grid_rows, grid_t).reshape(n, t.size)
    d = slope(grid_rows, grid_t).reshape(n, t.size)
    fl, fr = f[:, :-1], f[:, 1:]
    with np.errstate(invalid="ignore"):
        change = fl * fr < 0
        turn = ~change & (d[:, :-1] * d[:, 1:] < 0)

    r1, j1 = np.nonzero(change)
    rows = [r1]
    roots = [_illinois(lambda i, x: fn(r1[i], x), t[j1], t[j1 + 1], fl[r1, j1], fr[r1, j1])]

    r2, j2 = np.nonzero(turn)
    if r2.size:
        tc = _illinois(lambda i, x: slope(r2[i], x), t[j2], t[j2 + 1], d[r2, j2], d[r2, j2 + 1])
        fc = fn(r2, tc)
        with np.errstate(invalid="ignore"):
            split = fc * fl[r2, j2] < 0
        r3, j3, tc3, fc3 = r2[split], j2[split], tc[split], fc[split]
        rows += [r3, r3]
        roots.append(_illinois(lambda i, x: fn(r3[i], x), t[j3], tc3, fl[r3, j3], fc3))
        roots.append(_illinois(lambda i, x: fn(r3[i], x), tc3, t[j3 + 1], fc3, fr[r3, j3]))
    return np.concatenate(rows), np.concatenate(roots)


def _breakpoints(n: int, rows_list: list[np.ndarray], roots_list: list[np.ndarray]) -> np.ndarray:
    """每行 [0, 排好序的根..., 1]，不足的位置补 1"""
    if not rows_list:
        return np.tile([0.0, 1.0], (n, 1))
    rows = np.concatenate(rows_list).astype(int)
    roots = np.clip(np.concatenate(roots_list), 0.0, 1.0)
    counts = np.bincount(rows, minlength=n)
    width = int(counts.max()) if n else 0
    brk = np.ones((n, width + 2))
    brk[:, 0] = 0.0
    if rows.size:
        order = np.argsort(rows, kind="stable")
        rs = rows[order]
        slot = np.arange(rs.size) - (np.cumsum(counts) - counts)[rs]
        brk[rs, 1 + slot] = roots[order]
    brk.sort(axis=1)
    return brk


def _to_global(lo: np.ndarray, h: np.ndarray, inv: np.ndarray, local: np.ndarray) -> np.ndarray:
    return lo + h * np.take_along_axis(local, inv, axis=1)


def _line_values(level: ParamLevel, lo: np.ndarray, h: np.ndarray, inv: np.ndarray, anchor: np.ndarray,
                 pos: int, target: float) -> LineFn:
    def fn(idx: np.ndarray, t: np.ndarray) -> np.ndarray:
        local = anchor[idx].copy()
        local[:, pos] = t
        return level.value(_to_global(lo[idx], h[idx], inv[idx], local)) - target

    return fn


def _line_slopes(level: ParamLevel, lo: np.ndarray, h: np.ndarray, inv: np.ndarray, perm: np.ndarray,
                 anchor: np.ndarray, pos: int) -> LineFn:
    def fn(idx: np.ndarray, t: np.ndarray) -> np.ndarray:
        local = anchor[idx].copy()
        local[:, pos] = t
        _, grad = level.value_and_gradient(_to_global(lo[idx], h[idx], inv[idx], local))
        return grad[np.arange(idx.size), perm[idx, pos]]

    return fn


def _integrate_cut_chunk(level: ParamLevel, weight: WeightFn, lo: np.ndarray, h: np.ndarray,
                         perm: np.ndarray, lower: float, upper: float, order: int) -> float:
    k = lo.shape[1]
    targets = _finite_targets(lower, upper)
    inv = np.argsort(perm, axis=1)
    x1, w1 = gauss_legendre01(order)
    cid = np.arange(lo.shape[0])
    loc = np.zeros((cid.size, k))
    wts = np.ones(cid.size)

    for pos in range(k):
        n = cid.size
        if n == 0:
            return 0.0
        c_lo, c_h, c_inv, c_perm = lo[cid], h[cid], inv[cid], perm[cid]
        rows_list, roots_list = [], []
        for bits in corners01(k - pos - 1):
            anchor = loc.copy()
            anchor[:, pos + 1:] = bits
            for target in targets:
                fn = _line_values(level, c_lo, c_h, c_inv, anchor, pos, target)
                if pos == 0:
                    slope = _line_slopes(level, c_lo, c_h, c_inv, c_perm, anchor, pos)
                    rows, roots = _all_roots(fn, slope, n, 2 * order)
                else:
                    rows, roots = _single_roots(fn, n)
                rows_list.append(rows)
                roots_list.append(roots)

        brk = _breakpoints(n, rows_list, roots_list)
        ni, si = np.nonzero(brk[:, 1:] > brk[:, :-1])
        start = brk[ni, si]
        length = brk[ni, si + 1] - start
        if pos == k - 1:
            mid = loc[ni].copy()
            mid[:, pos] = start + 0.5 * length
            phi = level.value(_to_global(c_lo[ni], c_h[ni], c_inv[ni], mid))
            with np.errstate(invalid="ignore"):
                keep = (phi > lower) & (phi < upper)
            ni, start, length = ni[keep], start[keep], length[keep]

        loc = np.repeat(loc[ni], order, axis=0)
        loc[:, pos] = (start[:, None] + length[:, None] * x1[None, :]).ravel()
        wts = (wts[ni][:, None] * length[:, None] * w1[None, :]).ravel()
        cid = np.repeat(cid[ni], order)

    if cid.size == 0:
        return 0.0
    vals = np.asarray(weight(_to_global(lo[cid], h[cid], inv[cid], loc)), dtype=float)
    return float(np.sum(wts * vals * np.prod(h[cid], axis=1)))


def _integrate_cut_cells(level: ParamLevel, weight: WeightFn, part: _Partition, lower: float,
                         upper: float, order: int) -> float:
    n_cut = part.cut_lo.shape[0]
    chunk = max(1, _BATCH_POINTS // (3 * order) ** part.k)
    total = 0.0
    for i in range(0, n_cut, chunk):
        total += _integrate_cut_chunk(level, weight, part.cut_lo[i:i + chunk], part.cut_h[i:i + chunk],
                                      part.cut_perm[i:i + chunk], lower, upper, order)
    return total


def _integrate_inside(weight: WeightFn, lo: np.ndarray, h: np.ndarray, order: int) -> float:
    if lo.shape[0] == 0:
        return 0.0
    nodes, weights = tensor_rule01(order, lo.shape[1])
    pts = (lo[:, None, :] + h[:, None, :] * nodes[None, :, :]).reshape(-1, lo.shape[1])
    vals = np.asarray(weight(pts), dtype=float).reshape(lo.shape[0], -1)
    return float(np.sum((vals @ weights) * np.prod(h, axis=1)))


def _integrate_fallback(level: ParamLevel, weight: WeightFn, lo: np.ndarray, h: np.ndarray,
                        lower: float, upper: float, order: int) -> tuple[float, float]:
    if lo.shape[0] == 0:
        return 0.0, 0.0
    k = lo.shape[1]
    nodes, weights = tensor_rule01(order, k)
    n_n = nodes.shape[0]
    pts = (lo[:, None, :] + h[:, None, :] * nodes[None, :, :]).reshape(-1, k)
    with np.errstate(invalid="ignore"):
        phi = level.value(pts)
        mask = (phi > lower) & (phi < upper)
    vals = np.zeros(pts.shape[0])
    if np.any(mask):
        vals[mask] = weight(pts[mask])
    vals = vals.reshape(lo.shape[0], n_n)
    vol = np.prod(h, axis=1)
    value = float(np.sum((vals @ weights) * vol))
    bound = float(np.sum(np.max(np.abs(vals), axis=1) * vol))
    return value, bound


def _integrate_partition(level: ParamLevel, weight: WeightFn, part: _Partition, lower: float,
                         upper: float, order: int) -> tuple[float, float]:
    v_in = _integrate_inside(weight, part.inside_lo, part.inside_h, order)
    v_cut = _integrate_cut_cells(level, weight, part, lower, upper, order)
    v_fb, b_fb = _integrate_fallback(level, weight, part.fallback_lo, part.fallback_h, lower, upper, order)
    return v_in + v_cut + v_fb, b_fb


def integrate_band(
        level: ParamLevel,
        weight: WeightFn,
        lo: np.ndarray,
        hi: np.ndarray,
        lower: float,
        upper: float,
        spec: QuadratureSpec,
        check_tolerance: bool = True,
) -> QuadratureResult:
    """
    ∫_{lower < φ(u) < upper} weight(u) du，lower 可取 -inf（即子水平集）。
    weight 只在带内的节点上求值。
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    part = _partition(level, lo, hi, lower, upper, spec)
    value, fb_bound = _integrate_partition(level, weight, part, lower, upper, spec.order)
    low_order = spec.order - 1 if spec.order > 2 else spec.order + 1
    value_low, _ = _integrate_partition(level, weight, part, lower, upper, low_order)
    bound = abs(value - value_low) + fb_bound + 1e-13 * max(1.0, abs(value))
    unresolved = part.fallback_lo.shape[0]

    logger.debug(
        f"band quadrature | cells={part.cells} inside={part.inside_lo.shape[0]} "
        f"cut={part.cut_lo.shape[0]} fallback={unresolved} value={value:.12g} bound={bound:.3e}"
    )
    if check_tolerance and bound > spec.tolerance * max(1.0, abs(value)):
        raise ToleranceNotMetError(
            f"quadrature bound {bound:.3e} exceeds tolerance {spec.tolerance:.1e}",
            data={"bound": bound, "value": value, "unresolved_cells": unresolved},
        )
    return QuadratureResult(value=value, error_bound=bound, cells=part.cells, unresolved=unresolved)
