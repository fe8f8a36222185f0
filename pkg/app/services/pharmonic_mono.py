# encoding: utf-8
"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/16 下午2:30
@desc: 平稳 p-调和映射的移动中心单调性业务层。

       E_s^(q) 总包含原点，能量积分取以原点为中心的极坐标：方向用球面乘积规则，
       径向用指数 m-1-pσ 的 Gauss–Jacobi 规则吸收 |∇u|^p ~ r^{-pσ} 的奇性；
       边界项在 ∂E_s^(q) = c + R·S^{m-1} 上积分，体积分增量沿射线在 [ρ_s(ω), ρ_t(ω)] 上积分。
"""
from __future__ import annotations

from typing import Callable, Optional, Sequence

import numpy as np
from loguru import logger

from app.core.config import settings
from app.core.exceptions import DomainError
from app.infra.quadrature import gauss_jacobi01, gauss_legendre01, integrate_box, integrate_box_faces, sphere_rule
from app.models.ball_family import QBallFamily
from app.models.maps import ConstantMap, MapSolution, PolynomialField, contract, gradient_power
from app.models.patch import euclidean_box, real_vec
from app.schemas.quadrature import QuadratureResult, QuadratureSpec
from app.schemas.reports import CheckResult, PharmReport
from app.services.geometry_service import integrate_sublevel

PointFn = Callable[[np.ndarray], np.ndarray]

# 边界项 A 的逐点下界（Cauchy–Schwarz）
A_POINTWISE_FLOOR = -1e-12


def _check(map_: MapSolution, family: QBallFamily) -> None:
    map_.check_exponent()
    if family.dim != map_.m:
        raise DomainError(f"family lives in R^{family.dim} but the map is defined on R^{map_.m}")
    if family.q > map_.p:
        raise DomainError(f"q must lie in [1, p] = [1, {map_.p}], got q={family.q}")


def _angular_rule(m: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    return sphere_rule(m, 6 * order, 12 * order)


def polar_integral(map_: MapSolution, family: QBallFamily, s: float, fn: PointFn, order: int) -> float:
    """
    ∫_{E_s^(q)} fn = Σ_ω w_ω ρ(ω)^m ∫_0^1 t^β [t^{pσ} fn(ρ t ω)] dt，β = m-1-pσ。
    """
    m = map_.m
    omega, w_omega = _angular_rule(m, order)
    rho = family.exit_radius(s, omega)
    sigma_p = map_.p * map_.singular_order
    beta = m - 1 - sigma_p
    t, w_t = gauss_jacobi01(3 * order, beta)
    x = rho[:, None, None] * t[None, :, None] * omega[:, None, :]
    vals = np.asarray(fn(x.reshape(-1, m)), dtype=float).reshape(omega.shape[0], t.size)
    radial = (vals * t[None, :] ** sigma_p) @ w_t
    return float(np.sum(w_omega * rho ** m * radial))


def energy_ratio(map_: MapSolution, family: QBallFamily, s: float,
                 spec: Optional[QuadratureSpec] = None) -> QuadratureResult:
    """s^{(p-m)/2} ∫_{E_s^(q)} |∇u|^p"""
    _check(map_, family)
    s = family._check_scale(s)
    order = (spec or QuadratureSpec()).order
    high = polar_integral(map_, family, s, map_.energy_density, order)
    low = polar_integral(map_, family, s, map_.energy_density, order - 1)
    factor = s ** (0.5 * (map_.p - map_.m))
    return QuadratureResult(value=factor * high, error_bound=factor * abs(high - low))


def energy_ratio_cartesian(map_: MapSolution, family: QBallFamily, s: float,
                           spec: Optional[QuadratureSpec] = None) -> QuadratureResult:
    """同一比值在包含 E_s^(q) 的坐标盒上用子水平集求积，仅用于光滑映射的交叉校验"""
    _check(map_, family)
    if map_.singular_order:
        raise DomainError("the Cartesian cross-check needs a map without singular points")
    c, r = family.centre_and_radius(s)
    box = euclidean_box(c - 1.05 * r, c + 1.05 * r)
    energy = integrate_sublevel(box, family, s, lambda pts: map_.energy_density(pts.x), spec)
    return energy.scaled(s ** (0.5 * (map_.p - map_.m)))


def energy_ratio_derivative(map_: MapSolution, family: QBallFamily, s: float,
                            spec: Optional[QuadratureSpec] = None) -> float:
    h = settings.tolerances.fd_step_rel * s
    return (energy_ratio(map_, family, s + h, spec).value - energy_ratio(map_, family, s - h, spec).value) / (2 * h)


def _sphere_terms(map_: MapSolution, family: QBallFamily, s: float, order: int) -> tuple[float, float, float]:
    m, p, q = map_.m, map_.p, family.q
    y = family.y
    c, radius = family.centre_and_radius(s)
    omega, w = _angular_rule(m, order)
    x = c + radius * omega
    d_s = radius ** (m - 1) * w
    grad = map_.gradient(x)
    norm2 = np.sum(grad * grad, axis=(1, 2))
    gp = gradient_power(norm2, p - 2.0)
    yu = contract(grad, y)
    xu = contract(grad, x)
    yu2 = np.sum(yu * yu, axis=1)
    a_point = gp * (family.y_norm2 * norm2 - yu2)
    b_point = gp * (p * np.sum(xu * xu, axis=1) - (p - q) * s * s * yu2)
    a_term = q * s ** (0.5 * (p - m + 2)) / (2.0 * radius) * float(np.sum(d_s * a_point))
    b_term = s ** (0.5 * (p - m - 2)) / (2.0 * radius) * float(np.sum(d_s * b_point))
    return a_term, b_term, float(np.min(a_point))


def pharm_boundary_terms(map_: MapSolution, family: QBallFamily, s: float,
                         spec: Optional[QuadratureSpec] = None) -> tuple[float, float]:
    """
    A = q s^{(p-m+2)/2}/(2R) ∫_{∂E} |∇u|^{p-2}(|y|²|∇u|² - |y·∇u|²)
    B = s^{(p-m-2)/2}/(2R) ∫_{∂E} |∇u|^{p-2}(p|x·∇u|² - (p-q)s²|y·∇u|²)
    """
    _check(map_, family)
    s = family._check_scale(s)
    a_term, b_term, a_min = _sphere_terms(map_, family, s, (spec or QuadratureSpec()).order)
    if a_min < A_POINTWISE_FLOOR:
        logger.warning(f"pharm boundary term A negative at a node | s={s:.6g} min={a_min:.3e}")
    return a_term, b_term


def pharm_bulk_increment(map_: MapSolution, family: QBallFamily, s: float, t: float,
                         spec: Optional[QuadratureSpec] = None) -> float:
    """
    q∫|∇u|^{p-2} f^{(p-m+4)/2}(|y|²|∇u|² - |y·∇u|²)/(|x|²+(q-1)f²|y|²)
    + ∫|∇u|^{p-2} f^{(p-m)/2}(p|x·∇u|² - (p-q)f²|y·∇u|²)/(|x|²+(q-1)f²|y|²)，积分区域 E_t \\ E_s。
    """
    _check(map_, family)
    if not 0.0 < s < t:
        raise DomainError(f"bulk increment needs 0 < s < t, got s={s}, t={t}")
    m, p, q = map_.m, map_.p, family.q
    y = family.y
    order = (spec or QuadratureSpec()).order
    omega, w_omega = _angular_rule(m, order)
    r_in = family.exit_radius(s, omega)
    r_out = family.exit_radius(t, omega)
    nodes, w_r = gauss_legendre01(3 * order)
    r = r_in[:, None] + (r_out - r_in)[:, None] * nodes[None, :]
    x = (r[:, :, None] * omega[:, None, :]).reshape(-1, m)

    f = family.values(x)
    grad = map_.gradient(x)
    norm2 = np.sum(grad * grad, axis=(1, 2))
    gp = gradient_power(norm2, p - 2.0)
    yu = contract(grad, y)
    xu = contract(grad, x)
    yu2 = np.sum(yu * yu, axis=1)
    den = np.sum(x * x, axis=1) + family.quadratic_coefficient * f * f
    first = q * gp * f ** (0.5 * (p - m + 4)) * (family.y_norm2 * norm2 - yu2) / den
    second = gp * f ** (0.5 * (p - m)) * (p * np.sum(xu * xu, axis=1) - (p - q) * f * f * yu2) / den
    vals = (first + second).reshape(omega.shape[0], nodes.size) * r ** (m - 1)
    radial = (vals @ w_r) * (r_out - r_in)
    return float(np.sum(w_omega * radial))


def scaling_exponent(map_: MapSolution, q: float) -> float:
    """((q-1)/(p-1))·(p-m)/2"""
    return (q - 1.0) / (map_.p - 1.0) * 0.5 * (map_.p - map_.m)


def is_constant_series(values: Sequence[float]) -> bool:
    vals = np.asarray(values, dtype=float)
    return bool(np.ptp(vals) <= settings.tolerances.constancy * max(1.0, float(np.max(np.abs(vals)))))


def _drops(values: Sequence[float]) -> list[Optional[float]]:
    out: list[Optional[float]] = [None]
    for a, b in zip(values[:-1], values[1:]):
        out.append(max(0.0, a - b))
    return out


def scaled_quantities(map_: MapSolution, family: QBallFamily, grid: Sequence[float],
                         ratios: Optional[Sequence[float]] = None,
                         spec: Optional[QuadratureSpec] = None) -> tuple[list[float], list[float]]:
    """
    (s^{((q-1)/(p-1))(p-m)/2}∫|∇u|^p，q=p 时的 s^{(p-m)/2}∫|∇u|^p)；q≠p 时第二列为空。
    """
    grid = [float(s) for s in grid]
    if ratios is None:
        ratios = [energy_ratio(map_, family, s, spec).value for s in grid]
    base = 0.5 * (map_.p - map_.m)
    energies = [r * s ** (-base) for r, s in zip(ratios, grid)]
    scaled = [e * s ** scaling_exponent(map_, family.q) for e, s in zip(energies, grid)]
    rigid = list(ratios) if family.q == map_.p else []
    return scaled, rigid


def expected_constancy(map_: MapSolution, family: QBallFamily) -> Optional[bool]:
    """q=p 时比值恒定的刚性判据；q≠p 时不作断言"""
    if family.q != map_.p:
        return None
    if family.y_norm2 > 0.0:
        return isinstance(map_, ConstantMap)
    return map_.homogeneous_degree_zero


def pharm_sweep(map_: MapSolution, family: QBallFamily, grid: Sequence[float],
                spec: Optional[QuadratureSpec] = None, tolerance: Optional[float] = None) -> PharmReport:
    """s 网格上的微分/积分恒等式、缩放能量单调性与刚性"""
    _check(map_, family)
    spec = spec or QuadratureSpec()
    tol = settings.tolerances
    grid = [float(s) for s in grid]
    if any(b <= a for a, b in zip(grid[:-1], grid[1:])):
        raise DomainError("s grid must be strictly increasing")
    report = PharmReport(title=f"pharm-mono {map_.label} q={family.q:g}", grid=grid)
    bound = 0.0
    a_min = 0.0
    for s in grid:
        ratio = energy_ratio(map_, family, s, spec)
        bound = max(bound, ratio.error_bound)
        a_term, b_term, a_low = _sphere_terms(map_, family, s, spec.order)
        a_min = min(a_min, a_low)
        fd = energy_ratio_derivative(map_, family, s, spec)
        report.ratio.append(ratio.value)
        report.a_term.append(a_term)
        report.b_term.append(b_term)
        report.boundary_sum.append(a_term + b_term)
        report.fd_derivative.append(fd)
        report.residual.append(abs(fd - (a_term + b_term)) / (1.0 + abs(a_term + b_term)))
        logger.debug(f"pharm-mono sample | s={s:.6g} ratio={ratio.value:.12g} A={a_term:.6g} B={b_term:.6g}")
    report.quadrature_bound = bound

    integral_residuals: list[Optional[float]] = [None]
    report.bulk_increment.append(None)
    report.ratio_difference.append(None)
    for i in range(1, len(grid)):
        diff = report.ratio[i] - report.ratio[i - 1]
        bulk = pharm_bulk_increment(map_, family, grid[i - 1], grid[i], spec)
        report.ratio_difference.append(diff)
        report.bulk_increment.append(bulk)
        integral_residuals.append(abs(diff - bulk) / (1.0 + abs(report.ratio[i])))

    report.scaled_energy, report.rigid_ratio = scaled_quantities(map_, family, grid, report.ratio, spec)
    report.constant = is_constant_series(report.ratio)

    report.checks.append(CheckResult.from_residuals(
        "differential_identity", report.residual, tolerance if tolerance is not None else tol.identity_rel, grid))
    report.checks.append(CheckResult.from_residuals("integral_identity", integral_residuals, tol.integral_rel, grid))
    report.checks.append(CheckResult.flag("a_term_nonnegative", a_min >= A_POINTWISE_FLOOR, max(0.0, -a_min), 1e-12))
    report.checks.append(CheckResult.from_residuals(
        "scaled_energy_monotone", _drops(report.scaled_energy), tol.monotone_slack, grid))
    expected = expected_constancy(map_, family)
    if expected is not None:
        report.checks.append(CheckResult.flag(
            "rigidity", report.constant == expected, 0.0 if report.constant == expected else 1.0, 0.0,
            detail=f"constant={report.constant} expected={expected}"))
    logger.info(f"pharm-mono sweep | samples={len(grid)} passed={report.passed} constant={report.constant}")
    return report


# ========= 平稳性自检 =========

def stationarity_check(map_: MapSolution, lo: Sequence[float], hi: Sequence[float], field: PolynomialField,
                       spec: Optional[QuadratureSpec] = None) -> float:
    """
    内变分恒等式：盒内 ∫|∇u|^{p-2}(|∇u|² div X - p Σ ∂_iX_j ⟨u_i,u_j⟩)
    与边界 ∫|∇u|^{p-2}(|∇u|² X·ν - p⟨X·∇u, ν·∇u⟩) 之差，返回 |bulk - boundary|/(1+|bulk|)。
    """
    spec = spec or QuadratureSpec()
    lo_a, hi_a = real_vec(lo, map_.m), real_vec(hi, map_.m)
    p = map_.p

    def bulk_fn(x: np.ndarray) -> np.ndarray:
        grad = map_.gradient(x)
        norm2 = np.sum(grad * grad, axis=(1, 2))
        gram = np.einsum("nia,nja->nij", grad, grad)
        jac = field.jacobian(x)
        return gradient_power(norm2, p - 2.0) * (norm2 * field.divergence(x) - p * np.einsum("nij,nij->n", jac, gram))

    def face_fn(x: np.ndarray, normal: np.ndarray) -> np.ndarray:
        grad = map_.gradient(x)
        norm2 = np.sum(grad * grad, axis=(1, 2))
        xv = field.value(x)
        xu = contract(grad, xv)
        nu = contract(grad, normal)
        return gradient_power(norm2, p - 2.0) * (norm2 * np.sum(xv * normal, axis=1) - p * np.sum(xu * nu, axis=1))

    bulk = integrate_box(bulk_fn, lo_a, hi_a, spec.cells_per_axis, spec.order)
    boundary = integrate_box_faces(face_fn, lo_a, hi_a, spec.cells_per_axis, spec.order)
    return abs(bulk - boundary) / (1.0 + abs(bulk))
