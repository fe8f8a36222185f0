# encoding: utf-8

from typing import Union

import numpy as np

from app.core.consts import FlowEnum, HeatFlowEnum, MapEnum, PathEnum, SurfaceEnum
from app.core.exceptions import ConfigError
from app.models.ball_family import MinimalBallFamily, QBallFamily
from app.models.flows import (
    CentrePath,
    CirclePath,
    ConstantPath,
    FlowSolution,
    GaussianWeight,
    LinePath,
    ParabolaPath,
    ShrinkingCylinderFlow,
    ShrinkingSphereFlow,
    StaticPlaneFlow,
)
from app.models.maps import (
    ConstantMap,
    HeatFlowSolution,
    HeatKernelFlow,
    HeatWeight,
    LinearMap,
    MapSolution,
    RadialMap,
    StaticLinearFlow,
    ZeroFlow,
)
from app.models.patch import (
    SurfaceLike,
    catenoid,
    flat_disk_in_unit_ball,
    helicoid,
    orthonormal_complement,
    plane_pair,
    spherical_cap,
    tilted_plane,
)
from app.schemas.experiment import NEAREST_ORIGIN, ExperimentConfig
from app.schemas.quadrature import QuadratureSpec

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 上午10:30
@desc: 统一由 ExperimentConfig 构造目录对象（曲面、球族、流、路径、权重、映射、求积参数），
       供各子命令与 experiment_service 复用。配置组合不合法时抛 ConfigError（退出码 3）。
"""


# ========= 求积 =========


def get_quadrature_spec(config: ExperimentConfig) -> QuadratureSpec:
    """
    --quad-* 未给出的项沿用 settings.quadrature 默认值。
    """
    overrides = {
        "cells_per_axis": config.quad_cells,
        "order": config.quad_order,
        "refinement_depth": config.quad_depth,
        "tolerance": config.quad_tol,
    }
    return QuadratureSpec(**{k: v for k, v in overrides.items() if v is not None})


# ========= 工具 =========


def _vector(values, dim: int, what: str) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    if v.size != dim:
        raise ConfigError(f"{what} must have {dim} components, got {v.size}", data={"field": what})
    return v


def _unit(v: np.ndarray, what: str) -> np.ndarray:
    norm = np.linalg.norm(v)
    if norm < 1e-12:
        raise ConfigError(f"{what} must be nonzero", data={"field": what})
    return v / norm


# ========= 极小曲面 =========


def resolve_centre(config: ExperimentConfig) -> np.ndarray:
    """
    y = on-surface-nearest-origin 时取曲面上离原点最近的点：
      - catenoid: 颈圆上的 (a, 0, 0)
      - helicoid / tilted-plane: 原点
    其余曲面需显式给出 y。
    """
    if config.y != NEAREST_ORIGIN:
        return _vector(config.y, 3, "y")
    if config.surface == SurfaceEnum.CATENOID:
        return np.array([config.neck, 0.0, 0.0])
    if config.surface in (SurfaceEnum.HELICOID, SurfaceEnum.TILTED_PLANE):
        return np.zeros(3)
    raise ConfigError(
        f"y = {NEAREST_ORIGIN} is not defined for surface {config.surface.value!r}; give y explicitly",
        data={"field": "y"},
    )


def get_surface(config: ExperimentConfig, y: np.ndarray) -> SurfaceLike:
    kind = config.surface
    if kind == SurfaceEnum.FLAT_DISK:
        if config.orient_normal_to_y:
            normal = y / np.linalg.norm(y) if np.linalg.norm(y) > 1e-12 else np.array([0.0, 0.0, 1.0])
        else:
            normal = _unit(_vector(config.normal, 3, "normal"), "normal")
        return flat_disk_in_unit_ball(y, normal, y)
    if kind == SurfaceEnum.TILTED_PLANE:
        return tilted_plane(y, config.tilt_deg)
    if kind == SurfaceEnum.CATENOID:
        return catenoid(config.neck)
    if kind == SurfaceEnum.HELICOID:
        return helicoid(config.pitch)
    if kind == SurfaceEnum.PLANE_PAIR:
        first = _unit(_vector(config.normal, 3, "normal"), "normal")
        return plane_pair(y, (first, orthonormal_complement(first)[0]))
    if kind == SurfaceEnum.SPHERICAL_CAP:
        return spherical_cap(y, config.cap_radius)
    raise ConfigError(f"unknown surface {kind!r}")


def get_minimal_setup(config: ExperimentConfig) -> tuple[SurfaceLike, MinimalBallFamily]:
    y = resolve_centre(config)
    if np.dot(y, y) >= 1.0:
        raise ConfigError(f"|y| must be < 1, got {np.linalg.norm(y):.6g}", data={"field": "y"})
    return get_surface(config, y), MinimalBallFamily(y)


# ========= 平均曲率流 =========


def get_flow(config: ExperimentConfig) -> FlowSolution:
    if config.flow == FlowEnum.PLANE:
        return StaticPlaneFlow(normal=tuple(_unit(_vector(config.normal, 3, "normal"), "normal")))
    if config.flow == FlowEnum.SPHERE:
        return ShrinkingSphereFlow(t0=config.t0, k=2)
    if config.flow == FlowEnum.CIRCLE:
        return ShrinkingSphereFlow(centre=(0.0, 0.0), t0=config.t0, k=1)
    if config.flow == FlowEnum.CYLINDER:
        return ShrinkingCylinderFlow(t0=config.t0)
    raise ConfigError(f"unknown flow {config.flow!r}")


def path_direction(config: ExperimentConfig, dim: int, plane_normal: Union[tuple, None] = None) -> np.ndarray:
    """
    y0 = normal: 平面流取其法向，其余取最后一个坐标方向；
    y0 = axis: 最后一个坐标方向（圆柱为轴 e₃）；否则为显式向量。
    """
    if config.y0 == "normal" and plane_normal is not None:
        return np.asarray(plane_normal, dtype=float)
    if config.y0 in ("normal", "axis"):
        return np.eye(dim)[-1]
    return _vector(config.y0, dim, "y0")


def get_path(config: ExperimentConfig, dim: int, plane_normal: Union[tuple, None] = None) -> CentrePath:
    x0 = tuple(_vector(config.x0, dim, "x0")) if config.x0 is not None else (0.0,) * dim
    if config.path == PathEnum.CONSTANT:
        return ConstantPath(x0)
    if config.path == PathEnum.LINE:
        return LinePath(x0, tuple(path_direction(config, dim, plane_normal)), config.t0)
    if config.path == PathEnum.CIRCLE:
        return CirclePath(config.path_eps, ambient=dim)
    if config.path == PathEnum.PARABOLA:
        return ParabolaPath(config.path_eps, ambient=dim)
    raise ConfigError(f"unknown path {config.path!r}")


def get_mcf_setup(config: ExperimentConfig) -> tuple[FlowSolution, GaussianWeight]:
    flow = get_flow(config)
    normal = flow.normal if isinstance(flow, StaticPlaneFlow) else None
    path = get_path(config, flow.n, normal)
    return flow, GaussianWeight(k=flow.k, t0=config.t0, path=path)


def get_shrinker(config: ExperimentConfig):
    """entropy 子命令：t0 = 0 的流在 t = -1 的时间切片"""
    if config.flow == FlowEnum.PLANE:
        return StaticPlaneFlow(normal=tuple(_unit(_vector(config.normal, 3, "normal"), "normal"))).surface(-1.0)
    if config.flow == FlowEnum.SPHERE:
        return ShrinkingSphereFlow(k=2).surface(-1.0)
    if config.flow == FlowEnum.CIRCLE:
        return ShrinkingSphereFlow(centre=(0.0, 0.0), k=1).surface(-1.0)
    return ShrinkingCylinderFlow().surface(-1.0)


def get_centre(config: ExperimentConfig, dim: int) -> np.ndarray:
    """entropy / pharm-mono 的中心；零向量按环境维数补齐"""
    if config.y == NEAREST_ORIGIN:
        raise ConfigError(f"y = {NEAREST_ORIGIN} is only defined for minimal surfaces", data={"field": "y"})
    if not any(config.y):
        return np.zeros(dim)
    return _vector(config.y, dim, "y")


# ========= p-调和映射 / 热流 =========


def get_map(config: ExperimentConfig) -> MapSolution:
    m = config.m
    if config.map == MapEnum.CONSTANT:
        return ConstantMap(m=m, p=config.p)
    if config.map == MapEnum.LINEAR:
        rows = np.zeros((2, m))
        rows[0, 0], rows[1, 1] = 1.0, 2.0
        return LinearMap(matrix=tuple(tuple(r) for r in rows), p=config.p)
    if config.map == MapEnum.RADIAL:
        return RadialMap(m=m, p=config.p)
    raise ConfigError(f"unknown map {config.map!r}")


def get_pharm_setup(config: ExperimentConfig) -> tuple[MapSolution, QBallFamily]:
    map_ = get_map(config)
    y = get_centre(config, config.m)
    if not 1.0 <= config.q <= config.p:
        raise ConfigError(f"q must lie in [1, p] = [1, {config.p:g}], got {config.q:g}", data={"field": "q"})
    if config.q * np.dot(y, y) >= 1.0:
        raise ConfigError("q|y|² must be < 1", data={"field": "y"})
    return map_, QBallFamily(y, config.q)


def get_heat_flow(config: ExperimentConfig) -> HeatFlowSolution:
    if config.heat_flow == HeatFlowEnum.ZERO:
        return ZeroFlow(m=config.m)
    if config.heat_flow == HeatFlowEnum.LINEAR:
        return StaticLinearFlow(a=tuple(_vector(config.heat_a, config.m, "heat_a")))
    if config.heat_flow == HeatFlowEnum.HEAT_KERNEL:
        return HeatKernelFlow(m=config.m, t_start=config.t_start)
    raise ConfigError(f"unknown heat flow {config.heat_flow!r}")


def get_heat_setup(config: ExperimentConfig) -> tuple[HeatFlowSolution, HeatWeight]:
    flow = get_heat_flow(config)
    return flow, HeatWeight(m=flow.m, t0=config.t0, path=get_path(config, flow.m))
