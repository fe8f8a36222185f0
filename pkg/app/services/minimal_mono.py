# encoding: utf-8
"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/15 下午4:45
@desc: 极小子流形的移动中心单调性业务层。

       面积比 s^{-k/2}|Σ∩E_s|、其导数的边界通量形式、积分形式的体积分增量，
       Brendle–Hung 下界及其密度外推、L∞ 平均曲率下的积分因子，
       以及 Brendle–Hung 向量场 W₀ 的散度恒等式。
"""
from __future__ import annotations

from typing import Callable, Optional, Sequence, TypeVar

import numpy as np
from loguru import logger
from scipy.special import gamma

from app.core.config import settings
from app.core.consts import MIN_BULK_SCALE, FaultEnum
from app.core.exceptions import (
    BoundaryContactError,
    DomainError,
    ExtrapolationError,
    RegularValueError,
    ToleranceNotMetError,
)
from app.models.ball_family import MinimalBallFamily
from app.models.patch import ParametricPatch, PatchPoints, SurfaceLike, as_points, charts_of
from app.schemas.quadrature import QuadratureResult, QuadratureSpec
from app.schemas.reports import BHFieldSample, BrendleHungReport, CheckResult, MinimalMonoReport
from app.services.geometry_service import integrate_band_on, integrate_level_curve, integrate_sublevel

# Θ 离整数不超过该值时取整
DENSITY_SNAP = 1e-3
# Richardson 外推收敛判据（相对 max(1,|T|)）
_EXTRAPOLATION_REL = 0.05
# W₀ 数值散度的差分步长（相对参数范围）
_FD_STEP = 2e-4
# 单个样本误差界不达标时，单元尺寸最多再减半的次数
_SAMPLE_REFINEMENTS = 2

T = TypeVar("T")


def unit_ball_volume(k: int) -> float:
    """|B₁ᵏ| = π^{k/2} / Γ(k/2 + 1)"""
    return float(np.pi ** (0.5 * k) / gamma(0.5 * k + 1.0))


def _dimension(surface: SurfaceLike) -> int:
    return charts_of(surface)[0].k


def _is_minimal(surface: SurfaceLike) -> bool:
    return all(p.minimal for p in charts_of(surface))


def ensure_clear_boundary(surface: SurfaceLike, family: MinimalBallFamily, s: float) -> None:
    """曲面边界必须落在闭球 E_s 之外，否则子水平集积分不是 |Σ∩E_s|"""
    for patch in charts_of(surface):
        u = patch.boundary_samples()
        if u.shape[0] == 0:
            continue
        f = family.values(patch.embed(u))
        if np.min(f) <= s:
            i = int(np.argmin(f))
            raise BoundaryContactError(
                f"boundary of {patch.label!r} meets the closed ball E_s at s={s:.6g}",
                data={"s": s, "u": u[i].tolist(), "f": float(f[i])},
            )


def area_ratio(surface: SurfaceLike, family: MinimalBallFamily, s: float,
               spec: Optional[QuadratureSpec] = None) -> QuadratureResult:
    """s^{-k/2} |Σ ∩ E_s|"""
    s = family._check_scale(s)
    ensure_clear_boundary(surface, family, s)
    area = integrate_sublevel(surface, family, s, None, spec)
    return area.scaled(s ** (-0.5 * _dimension(surface)))


def ratio_derivative(surface: SurfaceLike, family: MinimalBallFamily, s: float,
                     spec: Optional[QuadratureSpec] = None) -> float:
    """面积比对 s 的中心差分"""
    h = settings.tolerances.fd_step_rel * s
    up = area_ratio(surface, family, s + h, spec).value
    down = area_ratio(surface, family, s - h, spec).value
    return (up - down) / (2.0 * h)


def boundary_flux(surface: SurfaceLike, family: MinimalBallFamily, s: float,
                  spec: Optional[QuadratureSpec] = None) -> float:
    """
    (s^{-(k+2)/2}/2) ∫_{Σ∩∂E_s} (|(x-y)^⊥|² + s²|y^T|²) / |(x-y+sy)^T|，仅 k=2。
    """
    s = family._check_scale(s)
    k = _dimension(surface)
    if k != 2:
        raise DomainError(f"boundary flux is evaluated on surfaces (k=2), got k={k}")
    ensure_clear_boundary(surface, family, s)
    y = family.y

    def integrand(pts: PatchPoints) -> np.ndarray:
        d = pts.x - y
        perp = pts.normal(d)
        y_t = pts.tangential(y)
        w_t = pts.tangential(d + s * y)
        num = np.sum(perp * perp, axis=1) + s * s * np.sum(y_t * y_t, axis=1)
        return num / np.linalg.norm(w_t, axis=1)

    value = integrate_level_curve(surface, family, s, integrand, spec)
    return 0.5 * s ** (-0.5 * (k + 2)) * value


def bulk_increment(surface: SurfaceLike, family: MinimalBallFamily, s: float, t: float,
                   spec: Optional[QuadratureSpec] = None) -> QuadratureResult:
    """∫_{Σ∩{s<f<t}} f^{-k/2} (|(x-y)^⊥|² + f²|y^T|²) / |x-y|²"""
    if not 0.0 < s < t:
        raise DomainError(f"bulk increment needs 0 < s < t, got s={s}, t={t}")
    if s < MIN_BULK_SCALE:
        raise DomainError(f"bulk increment needs s >= {MIN_BULK_SCALE:g}: the weight f^(-k/2) is too singular")
    ensure_clear_boundary(surface, family, t)
    k = _dimension(surface)
    y = family.y

    def integrand(pts: PatchPoints) -> np.ndarray:
        f = family.values(pts.x)
        d = pts.x - y
        perp = pts.normal(d)
        y_t = pts.tangential(y)
        num = np.sum(perp * perp, axis=1) + f * f * np.sum(y_t * y_t, axis=1)
        return f ** (-0.5 * k) * num / np.sum(d * d, axis=1)

    return integrate_band_on(surface, family, s, t, integrand, spec or QuadratureSpec())


def almost_mono_factor(family: MinimalBallFamily, c_h: float, s: float, k: int) -> float:
    """exp(k C_H μ(s))，μ(s) = (3/2)s|y| + √(s(1-|y|²))"""
    if c_h < 0:
        raise DomainError(f"C_H must be non-negative, got {c_h}")
    s = family._check_scale(s)
    y_norm = float(np.linalg.norm(family.y))
    mu = 1.5 * s * y_norm + np.sqrt(s * (1.0 - family.y_norm2))
    return float(np.exp(k * c_h * mu))


def with_refinement(compute: Callable[[QuadratureSpec], T], spec: QuadratureSpec, what: str, s: float) -> T:
    """
    水平集贴近临界值（子水平集刚出现）时初始单元可能不够细：
    误差界不达标就把单元减半重算，仍不达标则照常抛出。
    """
    current = spec
    for _ in range(_SAMPLE_REFINEMENTS):
        try:
            return compute(current)
        except ToleranceNotMetError as e:
            logger.warning(f"{what} refined | s={s:.6g} cells={current.cells_per_axis} "
                           f"bound={(e.data or {}).get('bound')}")
            current = current.halved()
    return compute(current)


def _monotone_residuals(values: Sequence[float]) -> list[Optional[float]]:
    """第 i 项为 max(0, v[i-1] - v[i])，首项为 None"""
    out: list[Optional[float]] = [None]
    for a, b in zip(values[:-1], values[1:]):
        out.append(max(0.0, a - b))
    return out


def minimal_mono_sweep(surface: SurfaceLike, family: MinimalBallFamily, grid: Sequence[float],
                       spec: Optional[QuadratureSpec] = None, c_h: Optional[float] = None,
                       fault: FaultEnum = FaultEnum.NONE,
                       tolerance: Optional[float] = None) -> MinimalMonoReport:
    """
    在 s 网格上扫描面积比。极小曲面上同时校验微分形式（边界通量 vs 中心差分）
    与积分形式（体积分增量 vs 面积比之差）；非极小曲面（球冠）按 exp(kC_Hμ) 校正后只校验单调性。
    """
    spec = spec or QuadratureSpec()
    tol = settings.tolerances
    grid = [float(s) for s in grid]
    if any(b <= a for a, b in zip(grid[:-1], grid[1:])):
        raise DomainError("s grid must be strictly increasing")
    k = _dimension(surface)
    minimal = _is_minimal(surface)
    if not minimal and c_h is None:
        c_h = max(p.curvature_bound or 0.0 for p in charts_of(surface))

    report = MinimalMonoReport(title=f"min-mono {charts_of(surface)[0].label}", grid=grid)
    bound = 0.0
    for s in grid:
        res = with_refinement(lambda sp: area_ratio(surface, family, s, sp), spec, "area ratio", s)
        bound = max(bound, res.error_bound)
        report.ratio.append(res.value)
        logger.debug(f"min-mono sample | s={s:.6g} ratio={res.value:.12g} bound={res.error_bound:.2e}")
    report.quadrature_bound = bound

    if not minimal:
        report.almost_factor = [almost_mono_factor(family, c_h, s, k) for s in grid]
        report.corrected_ratio = [f * r for f, r in zip(report.almost_factor, report.ratio)]
        drops = _monotone_residuals(report.corrected_ratio)
        report.checks.append(CheckResult.from_residuals(
            "almost_monotone", drops, tol.monotone_slack, grid, detail=f"C_H={c_h:g}"))
        report.verdict = "monotone" if report.passed else "violation"
        return report

    drops = _monotone_residuals(report.ratio)
    report.checks.append(CheckResult.from_residuals("monotone", drops, tol.monotone_slack, grid))

    if k == 2:
        identity_tol = tolerance if tolerance is not None else tol.identity_rel
        skipped = 0
        for s in grid:
            try:
                flux = boundary_flux(surface, family, s, spec)
            except RegularValueError as e:
                logger.warning(f"boundary flux skipped | s={s:.6g} reason={e.msg}")
                report.boundary_flux.append(None)
                report.fd_derivative.append(None)
                report.residual.append(None)
                skipped += 1
                continue
            if fault == FaultEnum.NEGATE_FLUX:
                flux = -flux
            fd = with_refinement(lambda sp: ratio_derivative(surface, family, s, sp), spec, "ratio derivative", s)
            report.boundary_flux.append(flux)
            report.fd_derivative.append(fd)
            report.residual.append(abs(fd - flux) / (1.0 + abs(flux)))
        report.checks.append(CheckResult.from_residuals(
            "differential_identity", report.residual, identity_tol, grid,
            detail=f"{skipped} non-regular samples skipped" if skipped else None))
        fluxes = [f for f in report.boundary_flux if f is not None]
        if fluxes:
            report.checks.append(CheckResult.flag(
                "flux_nonnegative", min(fluxes) >= -tol.monotone_slack, max(0.0, -min(fluxes)), tol.monotone_slack))

    integral_residuals: list[Optional[float]] = [None]
    report.bulk_increment.append(None)
    report.ratio_difference.append(None)
    for i in range(1, len(grid)):
        s, t = grid[i - 1], grid[i]
        diff = report.ratio[i] - report.ratio[i - 1]
        report.ratio_difference.append(diff)
        if s < MIN_BULK_SCALE:
            report.bulk_increment.append(None)
            integral_residuals.append(None)
            continue
        bulk = with_refinement(lambda sp: bulk_increment(surface, family, s, t, sp), spec, "bulk increment", t).value
        report.bulk_increment.append(bulk)
        integral_residuals.append(abs(diff - bulk) / (1.0 + report.ratio[i]))
    report.checks.append(CheckResult.from_residuals("integral_identity", integral_residuals, tol.integral_rel, grid))

    report.verdict = "monotone" if report.passed else "violation"
    logger.info(f"min-mono sweep | samples={len(grid)} verdict={report.verdict} bound={bound:.2e}")
    return report


def richardson_sqrt(sequence: Sequence[float]) -> tuple[float, float]:
    """
    D_j 在 √s_j 逐次减半的样本上做 Richardson 外推，消去 √s 的各阶误差。
    返回 (外推值, 最后两层之差)。
    """
    table = [list(map(float, sequence))]
    for level in range(1, len(sequence)):
        prev = table[-1]
        factor = 2.0 ** level
        table.append([(factor * prev[j + 1] - prev[j]) / (factor - 1.0) for j in range(len(prev) - 1)])
    top = table[-1][0]
    estimate = abs(top - table[-2][-1]) if len(table) > 1 else np.inf
    return top, estimate


def density_limit(surface: SurfaceLike, family: MinimalBallFamily, s_min: float = 0.01,
                  samples: int = 4, spec: Optional[QuadratureSpec] = None) -> tuple[float, list[float]]:
    """
    Θ(Σ, y) = lim_{s→0} (1-|y|²)^{-k/2} s^{-k/2}|Σ∩E_s| / |B₁ᵏ|，返回 (外推值, 原始序列)。
    s_j = s_min / 4^j。
    """
    if samples < 2:
        raise DomainError("density extrapolation needs at least two samples")
    k = _dimension(surface)
    norm = (1.0 - family.y_norm2) ** (-0.5 * k) / unit_ball_volume(k)
    raw = [area_ratio(surface, family, s_min / 4.0 ** j, spec).value * norm for j in range(samples)]
    if max(raw) - min(raw) <= 1e-12 * max(1.0, abs(raw[0])):
        return raw[-1], raw

    value, estimate = richardson_sqrt(raw)
    if not np.isfinite(value) or estimate > _EXTRAPOLATION_REL * max(1.0, abs(value)):
        raise ExtrapolationError(
            "density extrapolation did not converge",
            data={"sequence": raw, "extrapolated": value, "estimate": estimate},
        )
    logger.debug(f"density limit | raw={raw} extrapolated={value:.10g} estimate={estimate:.2e}")
    return value, raw


def brendle_hung_check(surface: SurfaceLike, family: MinimalBallFamily, grid: Sequence[float],
                       spec: Optional[QuadratureSpec] = None, density_s_min: float = 0.01,
                       density_samples: int = 4) -> BrendleHungReport:
    """
    面积比单调 + s=1 处的下界 |Σ∩B(0,1)| ≥ |B₁ᵏ|(1-|y|²)^{k/2} Θ(Σ,y)。
    """
    if not _is_minimal(surface):
        raise DomainError("the Brendle–Hung bound is checked on minimal surfaces only")
    spec = spec or QuadratureSpec()
    tol = settings.tolerances
    grid = [float(s) for s in grid]
    k = _dimension(surface)

    report = BrendleHungReport(title=f"bh-check {charts_of(surface)[0].label}", grid=grid)
    bound = 0.0
    for s in grid:
        res = area_ratio(surface, family, s, spec)
        bound = max(bound, res.error_bound)
        report.ratio.append(res.value)
    report.checks.append(CheckResult.from_residuals(
        "monotone", _monotone_residuals(report.ratio), tol.monotone_slack, grid))

    one = area_ratio(surface, family, 1.0, spec)
    bound = max(bound, one.error_bound)
    theta, _ = density_limit(surface, family, density_s_min, density_samples, spec)
    report.density_raw = theta
    nearest = round(theta)
    report.density = float(nearest) if abs(theta - nearest) <= DENSITY_SNAP else theta

    report.ratio_at_one = one.value
    report.bound = unit_ball_volume(k) * (1.0 - family.y_norm2) ** (0.5 * k) * report.density
    report.margin = report.ratio_at_one - report.bound
    report.equality = abs(report.margin) <= tol.equality * max(1.0, report.bound)
    report.quadrature_bound = bound
    report.checks.append(CheckResult.flag(
        "bh_bound", report.margin >= -tol.equality * max(1.0, report.bound), max(0.0, -report.margin), tol.equality,
        detail=f"margin={report.margin:.6g} density={report.density:g}"))
    logger.info(f"bh-check | ratio(1)={one.value:.10g} bound={report.bound:.10g} margin={report.margin:.3e}")
    return report


# ========= Brendle–Hung 向量场 =========

def bh_profile(t: np.ndarray, k: int) -> np.ndarray:
    """F(t) = (t^{(2-k)/2} - 1)/(k-2)（k>2），k=2 时为 -½ log t"""
    t = np.asarray(t, dtype=float)
    if k == 2:
        return -0.5 * np.log(t)
    return (t ** (0.5 * (2 - k)) - 1.0) / (k - 2)


def bh_field(family: MinimalBallFamily, x: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """
    W = -(1/k)(f^{-k/2} - 1)(x-y) + F(f) y，W₀ = (1/k)(x-y) - W，批量返回 (W, W₀)。
    """
    xx = as_points(x, family.dim)
    f = family.values(xx)
    if np.any(~np.isfinite(f)) or np.any(f <= 0.0):
        raise DomainError("the Brendle–Hung field needs 0 < f(x) < inf")
    d = xx - family.y
    w = -(1.0 / k) * (f ** (-0.5 * k) - 1.0)[:, None] * d + bh_profile(f, k)[:, None] * family.y
    return w, d / k - w


def bh_field_identity(patch: ParametricPatch, family: MinimalBallFamily, u: np.ndarray) -> BHFieldSample:
    """
    在参数点 u 处用三种方式计算 div_Σ W₀：
    对 f 的链式法则展开、闭式 (f^{-k/2}|(x-y)^⊥|² + f^{-(k-4)/2}|y^T|²)/|x-y|²、
    以及沿坐标卡的四阶中心差分。
    """
    k = patch.k
    if k < 2:
        raise DomainError(f"the Brendle–Hung field is defined for k >= 2, got k={k}")
    uu = as_points(u, k)
    pts = patch.points(uu)
    x = pts.x
    f, df = family.values_and_gradients(x)
    if not np.isfinite(f[0]) or f[0] <= 0.0:
        raise DomainError(f"f(x) must be positive and finite, got {f[0]}")
    w, w0 = bh_field(family, x, k)

    d = x - family.y
    d_t = pts.tangential(d)
    d_perp = d - d_t
    y_t = pts.tangential(family.y)
    fk = f[0] ** (-0.5 * k)
    analytic = fk - 0.5 * f[0] ** (-0.5 * k - 1.0) * float(np.dot(d_t[0], df[0])) \
        + 0.5 * fk * float(np.dot(y_t[0], df[0]))
    closed = (fk * float(np.dot(d_perp[0], d_perp[0]))
              + f[0] ** (-0.5 * (k - 4)) * float(np.dot(y_t[0], y_t[0]))) / float(np.dot(d[0], d[0]))

    span = patch.hi - patch.lo
    partials = np.empty((k, patch.n))
    for i in range(k):
        h = _FD_STEP * span[i]
        stencil = np.repeat(uu, 4, axis=0)
        stencil[:, i] += np.array([-2.0, -1.0, 1.0, 2.0]) * h
        _, w0s = bh_field(family, patch.embed(stencil), k)
        partials[i] = (w0s[0] - 8.0 * w0s[1] + 8.0 * w0s[2] - w0s[3]) / (12.0 * h)
    g_inv = np.linalg.inv(pts.gram[0])
    numeric = float(np.einsum("ij,id,jd->", g_inv, partials, pts.jac[0]))

    return BHFieldSample(
        x=x[0].tolist(), w=w[0].tolist(), w0=w0[0].tolist(),
        div_analytic=float(analytic), div_closed_form=float(closed), div_numeric=numeric,
    )


def sample_bh_points(patch: ParametricPatch, family: MinimalBallFamily, count: int,
                     rng: np.random.Generator, f_range: tuple[float, float] = (0.1, 1.0)) -> np.ndarray:
    """在卡上均匀抽取 f ∈ f_range 的参数点"""
    found = []
    total = 0
    for _ in range(200):
        u = patch.lo + rng.random((4 * count, patch.k)) * (patch.hi - patch.lo)
        f = family.values(patch.embed(u))
        keep = u[(f > f_range[0]) & (f < f_range[1])]
        found.append(keep)
        total += keep.shape[0]
        if total >= count:
            break
    pts = np.concatenate(found)[:count]
    if pts.shape[0] < count:
        raise DomainError(f"could not sample {count} points with f in {f_range} on {patch.label!r}")
    return pts
