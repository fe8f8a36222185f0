# encoding: utf-8
"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/15 下午2:10
@desc: 几何核心业务层：切/法投影、曲面上子水平集 {g<c} 与带状区域的积分、水平曲线 {g=c} 上的线积分。
       所有积分在参数盒上进行，被积函数乘以面积元（或诱导弧长）；坐标卡之并逐卡相加。
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Protocol

import numpy as np

from app.core.exceptions import DomainError, ToleranceNotMetError
from app.infra.implicit_quadrature import integrate_band
from app.infra.level_curve import extract_level_polyline, integrate_polyline
from app.models.patch import ParametricPatch, PatchPoints, SurfaceLike, charts_of, real_vec
from app.schemas.quadrature import QuadratureResult, QuadratureSpec

PointIntegrand = Callable[[PatchPoints], np.ndarray]


class ScalarField(Protocol):
    """R^n 上的光滑函数 g，批量求值，定义域外返回 +inf"""

    def values(self, x: np.ndarray) -> np.ndarray: ...

    def values_and_gradients(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]: ...


@dataclass(frozen=True, eq=False)
class SquaredDistance:
    """g(x) = |x - c|²"""
    centre: np.ndarray

    def values(self, x: np.ndarray) -> np.ndarray:
        d = np.asarray(x, dtype=float) - self.centre
        return np.sum(d * d, axis=1)

    def values_and_gradients(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        d = np.asarray(x, dtype=float) - self.centre
        return np.sum(d * d, axis=1), 2.0 * d


@dataclass(frozen=True, eq=False)
class PatchLevel:
    """φ(u) = g(embed(u))，∇φ = J ∇g"""
    patch: ParametricPatch
    field: ScalarField

    def value(self, u: np.ndarray) -> np.ndarray:
        return self.field.values(self.patch.embed_fn(u))

    def value_and_gradient(self, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        val, grad = self.field.values_and_gradients(self.patch.embed_fn(u))
        jac = self.patch.jacobian_fn(u)
        return val, np.einsum("nid,nd->ni", jac, grad)


def tangential_part(patch: ParametricPatch, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """v^T 在参数点 u 处"""
    uu = real_vec(u, patch.k)
    vv = real_vec(v, patch.n)
    return patch.points(uu).tangential(vv)[0]


def normal_part(patch: ParametricPatch, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    vv = real_vec(v, patch.n)
    return vv - tangential_part(patch, u, vv)


def _area_weight(patch: ParametricPatch, integrand: Optional[PointIntegrand]) -> Callable[[np.ndarray], np.ndarray]:
    def weight(u: np.ndarray) -> np.ndarray:
        pts = patch.points(u)
        if integrand is None:
            return pts.area
        return np.asarray(integrand(pts), dtype=float) * pts.area

    return weight


def integrate_band_on(surface: SurfaceLike, g: ScalarField, lower: float, upper: float,
                      integrand: Optional[PointIntegrand], spec: QuadratureSpec,
                      check_tolerance: bool = True) -> QuadratureResult:
    """∫_{Σ ∩ {lower < g < upper}} integrand dA，逐卡相加"""
    total = QuadratureResult(0.0, 0.0)
    for patch in charts_of(surface):
        total = total + integrate_band(
            PatchLevel(patch, g), _area_weight(patch, integrand), patch.lo, patch.hi,
            lower, upper, spec, check_tolerance=False,
        )
    if check_tolerance and total.error_bound > spec.tolerance * max(1.0, abs(total.value)):
        raise ToleranceNotMetError(
            f"quadrature bound {total.error_bound:.3e} exceeds tolerance {spec.tolerance:.1e}",
            data={"bound": total.error_bound, "value": total.value, "unresolved_cells": total.unresolved},
        )
    return total


def integrate_sublevel(surface: SurfaceLike, g: ScalarField, c: float,
                       integrand: Optional[PointIntegrand] = None,
                       spec: Optional[QuadratureSpec] = None) -> QuadratureResult:
    """∫_{Σ ∩ {g < c}} integrand dA；integrand 缺省为 1（即面积）"""
    return integrate_band_on(surface, g, -np.inf, float(c), integrand, spec or QuadratureSpec())


def integrate_level_curve(surface: SurfaceLike, g: ScalarField, c: float,
                          integrand: Optional[PointIntegrand] = None,
                          spec: Optional[QuadratureSpec] = None) -> float:
    """∫_{Σ ∩ {g = c}} integrand ds，只支持 k=2"""
    spec = spec or QuadratureSpec()
    total = 0.0
    for patch in charts_of(surface):
        if patch.k != 2:
            raise DomainError(f"level-curve integrals need k=2, got k={patch.k} on {patch.label!r}")
        level = PatchLevel(patch, g)
        polyline = extract_level_polyline(level, patch.lo, patch.hi, float(c), spec.level_grid)

        def density(u: np.ndarray, du: np.ndarray, _patch: ParametricPatch = patch) -> np.ndarray:
            pts = _patch.points(u)
            speed = pts.speed(du)
            if integrand is None:
                return speed
            return np.asarray(integrand(pts), dtype=float) * speed

        total += integrate_polyline(level, polyline, density, spec.order)
    return total


def surface_area(surface: SurfaceLike, spec: Optional[QuadratureSpec] = None) -> QuadratureResult:
    """整个参数盒的面积"""
    return integrate_sublevel(surface, SquaredDistance(np.zeros(charts_of(surface)[0].n)), np.inf, None, spec)


def classical_area_ratio(surface: SurfaceLike, r: float, spec: Optional[QuadratureSpec] = None,
                         centre: Optional[np.ndarray] = None) -> float:
    """r^{-k} |Σ ∩ B_r(centre)|"""
    if not r > 0:
        raise DomainError(f"radius must be positive, got {r}")
    patches = charts_of(surface)
    c = np.zeros(patches[0].n) if centre is None else real_vec(centre, patches[0].n)
    area = integrate_sublevel(surface, SquaredDistance(c), r * r, None, spec)
    return area.value / r ** patches[0].k
