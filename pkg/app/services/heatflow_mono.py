# encoding: utf-8
"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/16 下午5:05
@desc: 调和映射热流的高斯加权能量与移动中心单调性业务层。

       R^m 上的加权积分用张量 Gauss–Hermite 规则：x = c + 2√κ ξ，
       ∫ g Φ = (2√κ)^m Σ w g(x) Φ(x) exp(|ξ|²)。
       默认 (c, κ) = (y(t), τ)；解的二次量自带更窄的高斯因子时（热核），
       (c, κ) 取两个高斯之积的中心与尺度，否则规则分辨不了被积函数。
       稠密网格版本（截断盒上的张量 Gauss–Legendre）只作为独立校验。
"""
from __future__ import annotations

from typing import Callable, Optional, Sequence

import numpy as np
from loguru import logger

from app.core.config import settings
from app.core.consts import FaultEnum
from app.core.exceptions import DomainError, ToleranceNotMetError
from app.infra.quadrature import hermite_rule, integrate_box
from app.models.flows import ConstantPath, tail_radius
from app.models.maps import HeatFlowSolution, HeatWeight, contract
from app.schemas.quadrature import QuadratureResult, QuadratureSpec
from app.schemas.reports import CheckResult, HeatReport

PointFn = Callable[[np.ndarray], np.ndarray]

# 梯度上界核对：截断盒每个方向的采样点数
_BOUND_SAMPLES = 9


def check_gradient_bound(flow: HeatFlowSolution, weight: HeatWeight, t: float) -> float:
    """在截断区域 y ± tail_radius(τ) 的采样网格上核对 |∇u| ≤ c，返回采样到的最大值"""
    c = flow.gradient_bound(t)
    if not np.isfinite(c):
        raise DomainError(f"heat flow {flow.label!r} has no finite gradient bound at t={t}")
    axis = np.linspace(-1.0, 1.0, _BOUND_SAMPLES)
    grid = np.stack(np.meshgrid(*([axis] * flow.m), indexing="ij"), axis=-1).reshape(-1, flow.m)
    pts = weight.centre(t) + tail_radius(weight.tau(t)) * grid
    worst = float(np.sqrt(np.max(flow.grad_norm2(pts, t))))
    if worst > c * (1.0 + 1e-9) + 1e-12:
        raise DomainError(
            f"|∇u| reaches {worst:.6g} on the truncated region, above the bound c={c:.6g}",
            data={"t": t, "sampled_max": worst, "bound": c},
        )
    return worst


def _check_pair(flow: HeatFlowSolution, weight: HeatWeight, t: float) -> None:
    if flow.m != weight.m:
        raise DomainError(f"heat flow lives on R^{flow.m} but the weight on R^{weight.m}")
    flow.check_time(t)
    weight.tau(t)
    check_gradient_bound(flow, weight, t)


def hermite_integral(weight: HeatWeight, t: float, fn: PointFn, order: Optional[int] = None,
                     focus: Optional[tuple[np.ndarray, float]] = None) -> QuadratureResult:
    """∫_{R^m} fn Φ_{y(t),t0}，误差界取两种阶数之差；focus = (c, κ) 为 fn 自带的高斯因子"""
    m = weight.m
    tau = weight.tau(t)
    y = weight.centre(t)
    order = order or settings.quadrature.hermite_order
    if focus is None:
        centre, kappa = y, tau
    else:
        f_centre, f_kappa = focus
        kappa = 1.0 / (1.0 / tau + 1.0 / f_kappa)
        centre = kappa * (y / tau + np.asarray(f_centre, dtype=float) / f_kappa)
    scale = (2.0 * np.sqrt(kappa)) ** m * (4.0 * np.pi * tau) ** (-0.5 * (m - 2))

    def at(n: int) -> float:
        xi, w = hermite_rule(n, m)
        x = centre + 2.0 * np.sqrt(kappa) * xi
        d = x - y
        # Φ 与 exp(|ξ|²) 合成一个指数
        expo = np.sum(xi * xi, axis=1) - np.sum(d * d, axis=1) / (4.0 * tau)
        return scale * float(np.sum(w * np.exp(expo) * np.asarray(fn(x), dtype=float)))

    high = at(order)
    low = at(max(4, (3 * order) // 4))
    return QuadratureResult(value=high, error_bound=abs(high - low))


def _checked(res: QuadratureResult, spec: QuadratureSpec, what: str) -> QuadratureResult:
    if res.error_bound > spec.tolerance * max(1.0, abs(res.value)):
        raise ToleranceNotMetError(
            f"{what}: truncation bound {res.error_bound:.3e} exceeds tolerance {spec.tolerance:.1e}",
            data={"bound": res.error_bound, "value": res.value},
        )
    return res


def weighted_energy(flow: HeatFlowSolution, weight: HeatWeight, t: float,
                    spec: Optional[QuadratureSpec] = None) -> QuadratureResult:
    """∫_{R^m} |∇u|² Φ_{y(t),t0}"""
    _check_pair(flow, weight, t)
    res = hermite_integral(weight, t, lambda x: flow.grad_norm2(x, t), focus=flow.gaussian_focus(t))
    return _checked(res, spec or QuadratureSpec(), "weighted energy")


def weighted_energy_dense(flow: HeatFlowSolution, weight: HeatWeight, t: float,
                          cells: int = 16, order: int = 10) -> float:
    """截断盒 y ± √(4τ ln 1e16) 上的张量 Gauss–Legendre 版本"""
    _check_pair(flow, weight, t)
    tau = weight.tau(t)
    y = weight.centre(t)
    half = tail_radius(tau)
    return integrate_box(lambda x: flow.grad_norm2(x, t) * weight(x, t), y - half, y + half, cells, order)


def heat_rhs(flow: HeatFlowSolution, weight: HeatWeight, t: float,
             spec: Optional[QuadratureSpec] = None) -> tuple[float, float]:
    """
    dissipation = 2∫|∂_t u - ∇u·(x-y-τy')/(2τ)|² Φ，excess = ½∫|∇u·y'|² Φ。
    """
    _check_pair(flow, weight, t)
    spec = spec or QuadratureSpec()
    tau = weight.tau(t)
    y = weight.centre(t)
    y_prime = weight.path.velocity(t)
    focus = flow.gaussian_focus(t)

    def dissipation_fn(x: np.ndarray) -> np.ndarray:
        grad = flow.gradient(x, t)
        v = flow.time_derivative(x, t) - contract(grad, (x - y - tau * y_prime) / (2.0 * tau))
        return 2.0 * np.sum(v * v, axis=1)

    def excess_fn(x: np.ndarray) -> np.ndarray:
        v = contract(flow.gradient(x, t), y_prime)
        return 0.5 * np.sum(v * v, axis=1)

    dissipation = _checked(hermite_integral(weight, t, dissipation_fn, focus=focus), spec, "heat dissipation").value
    excess = _checked(hermite_integral(weight, t, excess_fn, focus=focus), spec, "heat excess").value
    return dissipation, excess


def energy_derivative(flow: HeatFlowSolution, weight: HeatWeight, t: float,
                      spec: Optional[QuadratureSpec] = None) -> float:
    h = settings.tolerances.fd_step_rel * weight.tau(t)
    return (weighted_energy(flow, weight, t + h, spec).value - weighted_energy(flow, weight, t - h, spec).value) / (2 * h)


def heat_corrected_quantity(flow: HeatFlowSolution, weight: HeatWeight, t: float,
                            spec: Optional[QuadratureSpec] = None, energy: Optional[float] = None) -> float:
    """exp(+½∫_t^{t0}|y'|²) ∫|∇u|²Φ"""
    value = weighted_energy(flow, weight, t, spec).value if energy is None else energy
    return float(np.exp(0.5 * weight.path.energy(t, weight.t0)) * value)


def heat_sweep(flow: HeatFlowSolution, weight: HeatWeight, times: Sequence[float],
               spec: Optional[QuadratureSpec] = None, fault: FaultEnum = FaultEnum.NONE,
               tolerance: Optional[float] = None) -> HeatReport:
    spec = spec or QuadratureSpec()
    tol = settings.tolerances
    times = [float(t) for t in times]
    if any(b <= a for a, b in zip(times[:-1], times[1:])):
        raise DomainError("time grid must be strictly increasing")
    report = HeatReport(title=f"heat-mono {flow.label}/{weight.path.label}", grid=times)
    bound = 0.0
    for t in times:
        energy = weighted_energy(flow, weight, t, spec)
        bound = max(bound, energy.error_bound)
        dissipation, excess = heat_rhs(flow, weight, t, spec)
        rhs = -dissipation + excess
        if fault == FaultEnum.NEGATE_RHS:
            rhs = -rhs
        fd = energy_derivative(flow, weight, t, spec)
        report.energy.append(energy.value)
        report.dissipation.append(dissipation)
        report.excess.append(excess)
        report.rhs.append(rhs)
        report.fd_derivative.append(fd)
        report.residual.append(abs(fd - rhs) / (1.0 + abs(rhs)))
        report.corrected_quantity.append(heat_corrected_quantity(flow, weight, t, spec, energy=energy.value))
        logger.debug(f"heat-mono sample | t={t:.6g} energy={energy.value:.12g} rhs={rhs:.6g} fd={fd:.6g}")
    report.quadrature_bound = bound

    increases: list[Optional[float]] = [None]
    for a, b in zip(report.corrected_quantity[:-1], report.corrected_quantity[1:]):
        increases.append(max(0.0, b - a))
    report.checks.append(CheckResult.from_residuals(
        "differential_identity", report.residual, tolerance if tolerance is not None else tol.identity_rel, times))
    report.checks.append(CheckResult.from_residuals("corrected_nonincreasing", increases, tol.monotone_slack, times))
    if isinstance(weight.path, ConstantPath):
        report.checks.append(CheckResult.from_residuals("struwe_excess_zero", report.excess, tol.constancy, times))
    logger.info(f"heat-mono sweep | samples={len(times)} passed={report.passed}")
    return report
