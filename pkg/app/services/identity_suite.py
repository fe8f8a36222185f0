# encoding: utf-8
"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 上午9:20
@desc: 随机化恒等式自检：对目录中的曲面、球族、路径、流与映射逐项检查逐点恒等式，
       全部由 numpy.random.default_rng(seed) 驱动，同一 seed 结果一致。
"""
from __future__ import annotations

from typing import Callable, Optional

import numpy as np
from loguru import logger

from app.core.config import settings
from app.models.ball_family import MinimalBallFamily, QBallFamily
from app.models.flows import (
    CirclePath,
    ConstantPath,
    LinePath,
    ParabolaPath,
    ShrinkingCylinderFlow,
    ShrinkingSphereFlow,
    StaticPlaneFlow,
)
from app.models.maps import ConstantMap, HeatKernelFlow, LinearMap, PolynomialField, RadialMap, StaticLinearFlow
from app.models.patch import ParametricPatch, catenoid, flat_box, helicoid, spherical_cap, sphere, tilted_plane
from app.schemas.quadrature import QuadratureSpec
from app.schemas.reports import CheckResult, SuiteReport
from app.services.geometry_service import integrate_level_curve, integrate_sublevel
from app.services.minimal_mono import bh_field_identity, sample_bh_points
from app.services.pharmonic_mono import stationarity_check

STATIONARITY_BOX = ((0.5, -0.5, -0.5), (1.5, 0.5, 0.5))


def _patches() -> list[ParametricPatch]:
    y = np.array([0.3, 0.0, 0.0])
    return [
        tilted_plane(y, 30.0),
        catenoid(0.5),
        helicoid(0.5),
        sphere(np.array([0.1, -0.2, 0.3]), 1.3),
        spherical_cap(y, 2.0),
        flat_box(np.zeros(4), np.eye(4)[:3], 0.6, label="flat-box-3"),
    ]


def _random_u(patch: ParametricPatch, count: int, rng: np.random.Generator, margin: float = 0.02) -> np.ndarray:
    span = patch.hi - patch.lo
    return patch.lo + margin * span + rng.random((count, patch.k)) * (1.0 - 2.0 * margin) * span


def _random_y(rng: np.random.Generator, dim: int, bound: float) -> np.ndarray:
    v = rng.normal(size=dim)
    return v / np.linalg.norm(v) * bound * rng.random()


def _moderate(f: np.ndarray, cap: float = 10.0) -> np.ndarray:
    """有限且 f < cap 的样本，避开叶状区域边缘的病态点"""
    return np.isfinite(f) & (f < cap)


def check_projections(rng: np.random.Generator, samples: int) -> CheckResult:
    worst = 0.0
    for patch in _patches():
        pts = patch.points(_random_u(patch, samples, rng))
        v = rng.normal(size=(samples, patch.n))
        vt = pts.tangential(v)
        vn = pts.normal(v)
        scale = 1.0 + np.linalg.norm(v, axis=1)
        worst = max(worst,
                    float(np.max(np.linalg.norm(pts.tangential(vt) - vt, axis=1) / scale)),
                    float(np.max(np.linalg.norm(vt + vn - v, axis=1) / scale)),
                    float(np.max(np.abs(np.einsum("nid,nd->ni", pts.jac, vn)) / scale[:, None])))
    return CheckResult.flag("projection_idempotence", worst <= 1e-12, worst, 1e-12)


def check_jacobians(rng: np.random.Generator, samples: int) -> CheckResult:
    worst = 0.0
    h = 1e-6
    for patch in _patches():
        u = _random_u(patch, samples, rng)
        jac = patch.jacobian(u)
        for i in range(patch.k):
            e = np.zeros(patch.k)
            e[i] = h
            fd = (patch.embed(u + e) - patch.embed(u - e)) / (2 * h)
            err = np.linalg.norm(fd - jac[:, i, :], axis=1) / (1.0 + np.linalg.norm(jac[:, i, :], axis=1))
            worst = max(worst, float(np.max(err)))
    return CheckResult.flag("jacobian_fd", worst <= 1e-6, worst, 1e-6)


def check_mean_curvature(rng: np.random.Generator, samples: int) -> CheckResult:
    worst = 0.0
    for patch in _patches():
        u = _random_u(patch, samples, rng)
        h = patch.mean_curvature(u)
        jac = patch.jacobian(u)
        dots = np.abs(np.einsum("nid,nd->ni", jac, h))
        scale = 1.0 + np.linalg.norm(h, axis=1)[:, None] * np.linalg.norm(jac, axis=2)
        worst = max(worst, float(np.max(dots / scale)))
    return CheckResult.flag("mean_curvature_normal", worst <= 1e-10, worst, 1e-10)


def _families(rng: np.random.Generator, samples: int):
    for _ in range(samples):
        y = _random_y(rng, 3, 0.9)
        yield MinimalBallFamily(y)
        q = 1.0 + 2.0 * rng.random()
        yield QBallFamily(_random_y(rng, 3, 0.95 / np.sqrt(q)), q)


def check_nesting(rng: np.random.Generator, samples: int) -> CheckResult:
    worst = 0.0
    for family in _families(rng, samples):
        s, t = np.sort(rng.uniform(1e-3, 1.0, size=2))
        cs, rs = family.centre_and_radius(s)
        ct, rt = family.centre_and_radius(t)
        worst = max(worst, float(np.linalg.norm(cs - ct) + rs - rt))
    return CheckResult.flag("ball_nesting", worst <= 1e-12, max(0.0, worst), 1e-12)


def check_level_consistency(rng: np.random.Generator, samples: int) -> CheckResult:
    worst = 0.0
    for family in _families(rng, samples):
        s = rng.uniform(0.01, 1.0)
        x = family.boundary_point(s, rng.normal(size=3))
        worst = max(worst, abs(family.level_function(x) - s) / (1.0 + s))
    return CheckResult.flag("level_ball_consistency", worst <= 1e-10, worst, 1e-10)


def check_defining_identity(rng: np.random.Generator, samples: int) -> CheckResult:
    worst = 0.0
    for family in _families(rng, samples):
        x = rng.uniform(-0.7, 0.7, size=(8, 3))
        f = family.values(x)
        ok = _moderate(f)
        res = np.abs(family.defining_residual(x[ok])) / (1.0 + np.sum(x[ok] ** 2, axis=1))
        if res.size:
            worst = max(worst, float(np.max(res)))
    return CheckResult.flag("defining_identity", worst <= 1e-12, worst, 1e-12)


def check_gradients(rng: np.random.Generator, samples: int) -> list[CheckResult]:
    fd_worst = 0.0
    norm_worst = 0.0
    h = 1e-6
    for family in _families(rng, samples):
        x = rng.uniform(-0.6, 0.6, size=3)
        f = family.values(x[None, :])[0]
        if not 1e-3 < f < 10.0:
            continue
        grad = family.level_gradient(x)
        fd = np.array([(family.level_function(x + h * e) - family.level_function(x - h * e)) / (2 * h)
                       for e in np.eye(3)])
        fd_worst = max(fd_worst, float(np.linalg.norm(fd - grad) / max(1.0, np.linalg.norm(grad))))
        if isinstance(family, QBallFamily):
            ident = family.gradient_norm_identity(x[None, :])[0]
            norm_worst = max(norm_worst, abs(np.linalg.norm(grad) - ident) / max(1.0, ident))
    return [
        CheckResult.flag("level_gradient_fd", fd_worst <= 1e-8, fd_worst, 1e-8),
        CheckResult.flag("q_gradient_norm", norm_worst <= 1e-10, norm_worst, 1e-10),
    ]


def check_family_forms(rng: np.random.Generator, samples: int) -> list[CheckResult]:
    rigid = 0.0
    alternate = 0.0
    branch = 0.0
    for _ in range(samples):
        y = _random_y(rng, 3, 0.8)
        x = rng.uniform(-0.5, 0.5, size=(8, 3))
        minimal = MinimalBallFamily(y)
        q_one = QBallFamily(y, 1.0)
        fq = q_one.values(x)
        fm = minimal.values(y - x)
        ok = _moderate(fq) & _moderate(fm)
        rigid = max(rigid, float(np.max(np.abs(fq[ok] - fm[ok]) / (1.0 + fq[ok]), initial=0.0)))

        fa = minimal.values(x)
        fb = minimal.alternate_values(x)
        ok = _moderate(fa) & _moderate(fb)
        alternate = max(alternate, float(np.max(np.abs(fa[ok] - fb[ok]) / (1.0 + fa[ok]), initial=0.0)))

        y2 = float(np.dot(y, y))
        if y2 > 1e-6:
            below = QBallFamily(y, 1.0 + 0.5e-10 / y2)
            above = QBallFamily(y, 1.0 + 2e-10 / y2)
            f_lo, f_hi = below.values(x), above.values(x)
            ok = _moderate(f_lo) & _moderate(f_hi)
            branch = max(branch, float(np.max(np.abs(f_lo[ok] - f_hi[ok]) / (1.0 + f_lo[ok]), initial=0.0)))
    return [
        CheckResult.flag("rigid_motion", rigid <= 1e-11, rigid, 1e-11),
        CheckResult.flag("alternate_form", alternate <= 1e-11, alternate, 1e-11),
        CheckResult.flag("q_branch_continuity", branch <= 1e-8, branch, 1e-8),
    ]


def check_bh_field(rng: np.random.Generator, samples: int) -> list[CheckResult]:
    y3 = np.array([0.3, 0.0, 0.0])
    cases = [
        (tilted_plane(y3, 30.0), MinimalBallFamily(y3)),
        (catenoid(0.5), MinimalBallFamily(np.array([0.5, 0.0, 0.0]))),
        (flat_box(np.zeros(4), np.eye(4)[:3], 0.6, label="flat-box-3"),
         MinimalBallFamily(np.array([0.2, 0.1, 0.0, 0.3]))),
    ]
    analytic = 0.0
    numeric = 0.0
    for patch, family in cases:
        for u in sample_bh_points(patch, family, samples, rng):
            sample = bh_field_identity(patch, family, u)
            analytic = max(analytic, sample.analytic_error)
            numeric = max(numeric, sample.numeric_error)
    return [
        CheckResult.flag("bh_divergence_analytic", analytic <= 1e-6, analytic, 1e-6),
        CheckResult.flag("bh_divergence_numeric", numeric <= 1e-5, numeric, 1e-5),
    ]


def check_stationarity(rng: np.random.Generator, fields: int = 10,
                       spec: Optional[QuadratureSpec] = None) -> CheckResult:
    worst = 0.0
    lo, hi = STATIONARITY_BOX
    for map_ in (ConstantMap(), LinearMap(), RadialMap()):
        for _ in range(fields):
            worst = max(worst, stationarity_check(map_, lo, hi, PolynomialField.random(3, 3, rng), spec))
    limit = settings.tolerances.stationarity
    return CheckResult.flag("stationarity", worst <= limit, worst, limit)


def _fd_relative(fn: Callable[[float], np.ndarray], exact: np.ndarray, t: float, h: float = 1e-5) -> float:
    fd = (fn(t + h) - fn(t - h)) / (2 * h)
    return float(np.linalg.norm(fd - exact) / max(1.0, np.linalg.norm(exact)))


def check_paths(rng: np.random.Generator, samples: int) -> CheckResult:
    paths = [ConstantPath((0.1, 0.2, 0.3)), LinePath((0.0, 0.0, 0.0), (0.0, 0.0, 1.0)),
             CirclePath(0.3), ParabolaPath(0.3)]
    worst = 0.0
    for path in paths:
        for t in rng.uniform(-1.0, -0.1, size=samples):
            worst = max(worst, _fd_relative(path.position, path.velocity(t), t))
    return CheckResult.flag("path_velocity_fd", worst <= 1e-8, worst, 1e-8)


def check_flows(rng: np.random.Generator, samples: int) -> CheckResult:
    flows = [StaticPlaneFlow(), ShrinkingSphereFlow(k=2), ShrinkingSphereFlow(centre=(0.0, 0.0), k=1),
             ShrinkingCylinderFlow()]
    worst = 0.0
    for flow in flows:
        for t in rng.uniform(-1.0, -0.1, size=max(1, samples // 10)):
            patch = flow.surface(t).chart()
            u = _random_u(patch, 10, rng)
            diff = flow.velocity(t, u) - patch.mean_curvature(u)
            worst = max(worst, float(np.max(np.linalg.norm(diff, axis=1))))
    return CheckResult.flag("flow_velocity_is_mean_curvature", worst <= 1e-10, worst, 1e-10)


def check_maps(rng: np.random.Generator, samples: int) -> list[CheckResult]:
    grad_worst = 0.0
    heat_worst = 0.0
    h = 1e-6
    x = rng.uniform(0.3, 1.0, size=(samples, 3)) * rng.choice([-1.0, 1.0], size=(samples, 3))
    for map_ in (ConstantMap(), LinearMap(), RadialMap()):
        grad = map_.gradient(x)
        for i in range(3):
            e = np.zeros(3)
            e[i] = h
            fd = (map_.value(x + e) - map_.value(x - e)) / (2 * h)
            err = np.linalg.norm(fd - grad[:, i, :], axis=1) / np.maximum(1.0, np.linalg.norm(grad[:, i, :], axis=1))
            grad_worst = max(grad_worst, float(np.max(err)))
    for flow in (HeatKernelFlow(), StaticLinearFlow()):
        for t in rng.uniform(-0.8, 0.5, size=max(1, samples // 10)):
            res = flow.time_derivative(x, t) - flow.laplacian(x, t)
            heat_worst = max(heat_worst, float(np.max(np.abs(res))))
            grad = flow.gradient(x, t)
            for i in range(3):
                e = np.zeros(3)
                e[i] = h
                fd = (flow.value(x + e, t) - flow.value(x - e, t)) / (2 * h)
                err = np.linalg.norm(fd - grad[:, i, :], axis=1) / np.maximum(1.0, np.linalg.norm(grad[:, i, :], axis=1))
                grad_worst = max(grad_worst, float(np.max(err)))
    return [
        CheckResult.flag("map_gradient_fd", grad_worst <= 1e-8, grad_worst, 1e-8),
        CheckResult.flag("heat_equation_residual", heat_worst <= 1e-8, heat_worst, 1e-8),
    ]


def check_coarea(rng: np.random.Generator, levels: int = 5, spec: Optional[QuadratureSpec] = None) -> CheckResult:
    """d/dc |Σ∩{g<c}| 的中心差分与 ∫_{g=c} 1/|∇^Σ g| 比较"""
    y = np.array([0.3, 0.0, 0.0])
    patch = tilted_plane(y, 30.0)
    family = MinimalBallFamily(y)

    def inverse_gradient(pts) -> np.ndarray:
        _, grad = family.values_and_gradients(pts.x)
        return 1.0 / np.linalg.norm(pts.tangential(grad), axis=1)

    worst = 0.0
    for c in rng.uniform(0.2, 0.9, size=levels):
        h = 1e-3 * c
        fd = (integrate_sublevel(patch, family, c + h, None, spec).value
              - integrate_sublevel(patch, family, c - h, None, spec).value) / (2 * h)
        line = integrate_level_curve(patch, family, c, inverse_gradient, spec)
        worst = max(worst, abs(fd - line) / max(1.0, abs(line)))
    return CheckResult.flag("coarea_consistency", worst <= 1e-3, worst, 1e-3)


def run_identity_suite(seed: int = 0, samples: int = 100, spec: Optional[QuadratureSpec] = None) -> SuiteReport:
    rng = np.random.default_rng(seed)
    checks: list[CheckResult] = [
        check_projections(rng, samples),
        check_jacobians(rng, samples),
        check_mean_curvature(rng, samples),
        check_nesting(rng, samples),
        check_level_consistency(rng, samples),
        check_defining_identity(rng, samples),
        *check_gradients(rng, samples),
        *check_family_forms(rng, samples),
        *check_bh_field(rng, samples),
        check_stationarity(rng, spec=spec),
        check_paths(rng, samples),
        check_flows(rng, samples),
        *check_maps(rng, samples),
        check_coarea(rng, spec=spec),
    ]
    for c in checks:
        logger.debug(f"identity check | name={c.name} passed={c.passed} residual={c.worst_residual:.3e}")
    report = SuiteReport(title="identity-suite", grid=[float(i) for i in range(len(checks))], checks=checks, seed=seed)
    logger.info(f"identity suite | seed={seed} checks={len(checks)} passed={report.passed}")
    return report
