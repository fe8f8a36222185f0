# encoding: utf-8
"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/14 下午4:05
@desc: 参数曲面（解析浸入）定义与曲面目录。

       ParametricPatch 给出 k 维参数盒到 R^n 的浸入及其精确 Jacobian 与平均曲率向量；
       PatchPoints 在一批参数点上缓存 Gram 矩阵、面积元与切/法投影；
       PatchAtlas 是若干坐标卡的并（积分按卡相加）；
       非紧曲面（平面、圆柱）通过 chart(centre, radius) 取窗口。
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional, Protocol, Sequence, Union

import numpy as np

from app.core.consts import GRAM_FLOOR
from app.core.exceptions import DomainError, SingularChartError

ArrayFn = Callable[[np.ndarray], np.ndarray]


def as_points(u: np.ndarray, dim: int) -> np.ndarray:
    """把单点 (dim,) 或点阵 (N,dim) 统一成 (N,dim)。"""
    arr = np.asarray(u, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(1, dim) if dim > 0 else arr.reshape(-1, 0)
    if arr.shape[-1] != dim:
        raise DomainError(f"expected points of dimension {dim}, got shape {arr.shape}")
    return arr


def real_vec(values: Sequence[float] | np.ndarray, dim: Optional[int] = None) -> np.ndarray:
    """RealVec：有限的一维实向量。"""
    arr = np.asarray(values, dtype=float).reshape(-1)
    if dim is not None and arr.size != dim:
        raise DomainError(f"vector {arr.tolist()} must have dimension {dim}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"vector {arr.tolist()} has non-finite entries")
    return arr


def orthonormal_complement(normal: np.ndarray) -> np.ndarray:
    """返回与 normal 正交的标准正交基（行向量），按坐标轴顺序确定性构造。"""
    nrm = real_vec(normal)
    nrm = nrm / np.linalg.norm(nrm)
    basis = []
    for e in np.eye(nrm.size):
        v = e - np.dot(e, nrm) * nrm - sum(np.dot(e, b) * b for b in basis)
        if np.linalg.norm(v) > 1e-8:
            basis.append(v / np.linalg.norm(v))
        if len(basis) == nrm.size - 1:
            break
    return np.array(basis)


@dataclass(frozen=True, eq=False)
class PatchPoints:
    """一批参数点上的几何量"""
    u: np.ndarray
    x: np.ndarray
    jac: np.ndarray  # (N, k, n)，行为 ∂_i embed
    label: str = ""

    @cached_property
    def gram(self) -> np.ndarray:
        return np.einsum("nid,njd->nij", self.jac, self.jac)

    @cached_property
    def area(self) -> np.ndarray:
        det = np.linalg.det(self.gram)
        if np.any(det <= GRAM_FLOOR):
            bad = int(np.argmin(det))
            raise SingularChartError(
                f"degenerate chart on patch {self.label!r}",
                data={"u": self.u[bad].tolist(), "gram_det": float(det[bad])},
            )
        return np.sqrt(det)

    def tangential(self, v: np.ndarray) -> np.ndarray:
        """v^T：投影到 Jacobian 行空间"""
        _ = self.area
        vv = np.broadcast_to(np.asarray(v, dtype=float), self.x.shape)
        rhs = np.einsum("nid,nd->ni", self.jac, vv)
        coeff = np.linalg.solve(self.gram, rhs[..., None])[..., 0]
        return np.einsum("ni,nid->nd", coeff, self.jac)

    def normal(self, v: np.ndarray) -> np.ndarray:
        """v^⊥ = v - v^T"""
        vv = np.broadcast_to(np.asarray(v, dtype=float), self.x.shape)
        return vv - self.tangential(vv)

    def speed(self, du: np.ndarray) -> np.ndarray:
        """参数速度 du 对应的诱导弧长速度 |J^T du|"""
        return np.linalg.norm(np.einsum("ni,nid->nd", du, self.jac), axis=1)


@dataclass(frozen=True, eq=False)
class ParametricPatch:
    k: int
    n: int
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    embed_fn: ArrayFn
    jacobian_fn: ArrayFn
    mean_curvature_fn: Optional[ArrayFn] = None
    label: str = "patch"
    periodic: tuple[bool, ...] = ()
    minimal: bool = False
    # |H| 的上界（已知时）
    curvature_bound: Optional[float] = None
    # 坐标退化而非曲面边界的参数面 (axis, side)，side 0 为下界 1 为上界（极坐标中心、球面极点）
    interior_faces: tuple[tuple[int, int], ...] = ()

    @property
    def lo(self) -> np.ndarray:
        return np.asarray(self.lower, dtype=float)

    @property
    def hi(self) -> np.ndarray:
        return np.asarray(self.upper, dtype=float)

    def embed(self, u: np.ndarray) -> np.ndarray:
        return self.embed_fn(as_points(u, self.k))

    def jacobian(self, u: np.ndarray) -> np.ndarray:
        return self.jacobian_fn(as_points(u, self.k))

    def mean_curvature(self, u: np.ndarray) -> np.ndarray:
        uu = as_points(u, self.k)
        if self.mean_curvature_fn is None:
            if self.minimal:
                return np.zeros((uu.shape[0], self.n))
            raise DomainError(f"patch {self.label!r} does not declare a mean curvature vector")
        return self.mean_curvature_fn(uu)

    def points(self, u: np.ndarray) -> PatchPoints:
        uu = as_points(u, self.k)
        return PatchPoints(u=uu, x=self.embed_fn(uu), jac=self.jacobian_fn(uu), label=self.label)

    def chart(self, centre: Optional[np.ndarray] = None, radius: Optional[float] = None) -> "ParametricPatch":
        return self

    def is_periodic(self, axis: int) -> bool:
        return bool(self.periodic[axis]) if axis < len(self.periodic) else False

    def boundary_samples(self, per_side: int = 64) -> np.ndarray:
        """非周期方向边界面上的均匀采样参数点"""
        lo, hi = self.lo, self.hi
        out = []
        grid_1d = [np.linspace(lo[j], hi[j], per_side) for j in range(self.k)]
        for axis in range(self.k):
            if self.is_periodic(axis):
                continue
            others = [grid_1d[j] for j in range(self.k) if j != axis]
            mesh = np.meshgrid(*others, indexing="ij") if others else []
            flat = [g.ravel() for g in mesh]
            count = flat[0].size if flat else 1
            for side, value in enumerate((lo[axis], hi[axis])):
                if (axis, side) in self.interior_faces:
                    continue
                pts = np.empty((count, self.k))
                col = 0
                for j in range(self.k):
                    if j == axis:
                        pts[:, j] = value
                    else:
                        pts[:, j] = flat[col]
                        col += 1
                out.append(pts)
        return np.concatenate(out) if out else np.zeros((0, self.k))


@dataclass(frozen=True, eq=False)
class PatchAtlas:
    """若干坐标卡的并"""
    patches: tuple[ParametricPatch, ...]
    label: str = "atlas"

    @property
    def k(self) -> int:
        return self.patches[0].k

    @property
    def n(self) -> int:
        return self.patches[0].n

    @property
    def minimal(self) -> bool:
        return all(p.minimal for p in self.patches)


class Surface(Protocol):
    k: int
    n: int
    label: str

    def chart(self, centre: Optional[np.ndarray] = None, radius: Optional[float] = None) -> ParametricPatch: ...


SurfaceLike = Union[ParametricPatch, PatchAtlas]


def charts_of(surface: SurfaceLike) -> tuple[ParametricPatch, ...]:
    if isinstance(surface, PatchAtlas):
        return surface.patches
    return (surface,)


# ========= 目录：平面 / 圆盘 =========

def flat_disk(centre: np.ndarray, e1: np.ndarray, e2: np.ndarray, radius: float,
              label: str = "flat-disk") -> ParametricPatch:
    """平面圆盘的极坐标卡 u = (r, θ)，r ∈ [0, R]，θ ∈ [-π, π] 周期。"""
    c = real_vec(centre)
    a, b = real_vec(e1, c.size), real_vec(e2, c.size)

    def embed(u: np.ndarray) -> np.ndarray:
        r, t = u[:, 0:1], u[:, 1:2]
        return c + r * np.cos(t) * a + r * np.sin(t) * b

    def jac(u: np.ndarray) -> np.ndarray:
        r, t = u[:, 0:1], u[:, 1:2]
        d_r = np.cos(t) * a + np.sin(t) * b
        d_t = r * (-np.sin(t) * a + np.cos(t) * b)
        return np.stack([d_r, d_t], axis=1)

    return ParametricPatch(
        k=2, n=c.size, lower=(0.0, -np.pi), upper=(float(radius), np.pi),
        embed_fn=embed, jacobian_fn=jac, label=label, periodic=(False, True), minimal=True, interior_faces=((0, 0),),
        curvature_bound=0.0,
    )


def flat_box(origin: np.ndarray, basis: np.ndarray, half_widths: Sequence[float],
             label: str = "flat-box") -> ParametricPatch:
    """k 维平坦坐标卡 x = origin + Σ u_i b_i，u ∈ [-w, w]。"""
    o = real_vec(origin)
    B = np.atleast_2d(np.asarray(basis, dtype=float))
    k = B.shape[0]
    hw = np.asarray(half_widths, dtype=float).reshape(-1)
    if hw.size == 1:
        hw = np.repeat(hw, k)

    return ParametricPatch(
        k=k, n=o.size, lower=tuple(-hw), upper=tuple(hw),
        embed_fn=lambda u: o + u @ B,
        jacobian_fn=lambda u: np.broadcast_to(B, (u.shape[0],) + B.shape).copy(),
        label=label, periodic=(False,) * k, minimal=True, curvature_bound=0.0,
    )


def euclidean_box(lo: Sequence[float], hi: Sequence[float], label: str = "euclidean-box") -> ParametricPatch:
    """R^m 本身的恒等坐标卡"""
    lo_a, hi_a = real_vec(lo), real_vec(hi)
    m = lo_a.size
    eye = np.eye(m)
    return ParametricPatch(
        k=m, n=m, lower=tuple(lo_a), upper=tuple(hi_a),
        embed_fn=lambda u: u.copy(),
        jacobian_fn=lambda u: np.broadcast_to(eye, (u.shape[0], m, m)).copy(),
        label=label, periodic=(False,) * m, minimal=True, curvature_bound=0.0,
    )


def flat_disk_in_unit_ball(point: np.ndarray, normal: np.ndarray, y: np.ndarray,
                           label: str = "flat-disk") -> ParametricPatch:
    """
    包含 Σ ∩ B(0,1) 的平面圆盘卡，半径留出余量但不越出 ⟨x,y⟩ < (1+|y|²)/2 的叶状半空间。
    圆心优先取 y 在平面上的投影（小尺度水平集在极坐标下近似同心圆）；
    放不下时改取平面上离原点最近的点。
    """
    p = real_vec(point)
    nrm = real_vec(normal, p.size)
    nrm = nrm / np.linalg.norm(nrm)
    yy = real_vec(y, p.size)
    basis = orthonormal_complement(nrm)
    if basis.shape[0] != 2:
        raise DomainError("flat disks are two-dimensional: ambient dimension must be 3")

    foot = np.dot(p, nrm) * nrm
    if np.linalg.norm(foot) >= 1.0:
        raise DomainError(f"plane at distance {np.linalg.norm(foot):.3g} misses the unit ball")
    section = np.sqrt(1.0 - np.dot(foot, foot))
    y_t = yy - np.dot(yy, nrm) * nrm
    for centre in (yy - np.dot(yy - p, nrm) * nrm, foot):
        need = np.linalg.norm(foot - centre) + section
        room = 0.5 * (1.0 + np.dot(yy, yy)) - np.dot(centre, yy)
        limit = room / np.linalg.norm(y_t) if np.linalg.norm(y_t) > 1e-12 else np.inf
        if limit > need * (1.0 + 1e-6):
            radius = min(1.1 * need, need + 0.5 * (limit - need))
            return flat_disk(centre, basis[0], basis[1], radius, label=label)
    raise DomainError("plane ∩ B(0,1) is not contained in the foliated half-space")


def tilted_plane(y: np.ndarray, tilt_deg: float, through: Optional[np.ndarray] = None,
                 label: str = "tilted-plane") -> ParametricPatch:
    """
    过 through（默认原点）的平面，法向由 ŷ 向 e₂ 方向（y 平行 e₂ 时向 e₃）旋转 tilt 角。
    """
    yy = real_vec(y, 3)
    axis = yy / np.linalg.norm(yy) if np.linalg.norm(yy) > 1e-12 else np.array([1.0, 0.0, 0.0])
    aux = np.array([0.0, 1.0, 0.0]) if abs(axis[1]) < 0.9 else np.array([0.0, 0.0, 1.0])
    perp = aux - np.dot(aux, axis) * axis
    perp /= np.linalg.norm(perp)
    t = np.deg2rad(tilt_deg)
    normal = np.cos(t) * axis + np.sin(t) * perp
    point = np.zeros(3) if through is None else real_vec(through, 3)
    return flat_disk_in_unit_ball(point, normal, yy, label=label)


def plane_pair(y: np.ndarray, normals: Sequence[np.ndarray], label: str = "plane-pair") -> PatchAtlas:
    """过 y 的若干平面之并（y 处密度等于平面个数）"""
    yy = real_vec(y, 3)
    return PatchAtlas(
        patches=tuple(flat_disk_in_unit_ball(yy, nv, yy, label=f"{label}[{i}]") for i, nv in enumerate(normals)),
        label=label,
    )


# ========= 目录：球面 / 圆 / 球冠 =========

def sphere(centre: np.ndarray, radius: float, label: str = "sphere") -> ParametricPatch:
    """R³ 中的球面，u = (θ ∈ [0,π], φ ∈ [-π,π] 周期)"""
    c = real_vec(centre, 3)
    R = float(radius)

    def embed(u: np.ndarray) -> np.ndarray:
        th, ph = u[:, 0], u[:, 1]
        return c + R * np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], axis=1)

    def jac(u: np.ndarray) -> np.ndarray:
        th, ph = u[:, 0], u[:, 1]
        d_th = R * np.stack([np.cos(th) * np.cos(ph), np.cos(th) * np.sin(ph), -np.sin(th)], axis=1)
        d_ph = R * np.stack([-np.sin(th) * np.sin(ph), np.sin(th) * np.cos(ph), np.zeros_like(th)], axis=1)
        return np.stack([d_th, d_ph], axis=1)

    return ParametricPatch(
        k=2, n=3, lower=(0.0, -np.pi), upper=(np.pi, np.pi),
        embed_fn=embed, jacobian_fn=jac,
        mean_curvature_fn=lambda u: -(2.0 / R ** 2) * (embed(u) - c),
        label=label, periodic=(False, True), curvature_bound=2.0 / R, interior_faces=((0, 0), (0, 1)),
    )


def circle(centre: np.ndarray, radius: float, label: str = "circle") -> ParametricPatch:
    """R² 中的圆，u = θ ∈ [-π, π] 周期"""
    c = real_vec(centre, 2)
    R = float(radius)

    def embed(u: np.ndarray) -> np.ndarray:
        t = u[:, 0]
        return c + R * np.stack([np.cos(t), np.sin(t)], axis=1)

    def jac(u: np.ndarray) -> np.ndarray:
        t = u[:, 0]
        return (R * np.stack([-np.sin(t), np.cos(t)], axis=1))[:, None, :]

    return ParametricPatch(
        k=1, n=2, lower=(-np.pi,), upper=(np.pi,),
        embed_fn=embed, jacobian_fn=jac,
        mean_curvature_fn=lambda u: -(1.0 / R ** 2) * (embed(u) - c),
        label=label, periodic=(True,), curvature_bound=1.0 / R,
    )


def spherical_cap(y: np.ndarray, radius: float = 2.0, label: str = "spherical-cap") -> ParametricPatch:
    """
    过 y 的半径 R 球冠，在 y 处切平面与 y 正交，向远离原点一侧弯曲（|H| = 2/R）。
    u = (α ∈ [0, α_max], θ 周期)；α_max 使边界落在单位球外且仍在叶状半空间内。
    """
    yy = real_vec(y, 3)
    R = float(radius)
    ny = np.linalg.norm(yy)
    nu = yy / ny if ny > 1e-12 else np.array([0.0, 0.0, 1.0])
    e1, e2 = orthonormal_complement(nu)
    c = yy + R * nu
    a_exit = (1.0 - ny ** 2) / (2.0 * R * (ny + R))
    a_fol = (1.0 - ny ** 2) / (2.0 * ny * R) if ny > 1e-12 else np.inf
    a_max = min(1.5 * a_exit, 0.5 * (a_exit + a_fol), 1.9)
    alpha_max = float(np.arccos(1.0 - a_max))

    def embed(u: np.ndarray) -> np.ndarray:
        al, th = u[:, 0:1], u[:, 1:2]
        w = np.cos(th) * e1 + np.sin(th) * e2
        return yy + R * (1.0 - np.cos(al)) * nu + R * np.sin(al) * w

    def jac(u: np.ndarray) -> np.ndarray:
        al, th = u[:, 0:1], u[:, 1:2]
        w = np.cos(th) * e1 + np.sin(th) * e2
        dw = -np.sin(th) * e1 + np.cos(th) * e2
        return np.stack([R * np.sin(al) * nu + R * np.cos(al) * w, R * np.sin(al) * dw], axis=1)

    return ParametricPatch(
        k=2, n=3, lower=(0.0, -np.pi), upper=(alpha_max, np.pi),
        embed_fn=embed, jacobian_fn=jac,
        mean_curvature_fn=lambda u: -(2.0 / R ** 2) * (embed(u) - c),
        label=label, periodic=(False, True), curvature_bound=2.0 / R, interior_faces=((0, 0),),
    )


# ========= 目录：极小曲面 =========

def catenoid(neck: float = 0.5, v_max: Optional[float] = None, label: str = "catenoid") -> ParametricPatch:
    """
    悬链面 x = (a cosh(v/a) cosθ, a cosh(v/a) sinθ, v)，u = (v, θ ∈ [-π,π] 周期)。
    默认 v_max 取 1.4a，使 neck=0.5 时整张卡留在 y=(a,0,0) 的叶状半空间内。
    """
    a = float(neck)
    vm = 1.4 * a if v_max is None else float(v_max)

    def embed(u: np.ndarray) -> np.ndarray:
        v, t = u[:, 0], u[:, 1]
        ch = a * np.cosh(v / a)
        return np.stack([ch * np.cos(t), ch * np.sin(t), v], axis=1)

    def jac(u: np.ndarray) -> np.ndarray:
        v, t = u[:, 0], u[:, 1]
        sh, ch = np.sinh(v / a), a * np.cosh(v / a)
        d_v = np.stack([sh * np.cos(t), sh * np.sin(t), np.ones_like(v)], axis=1)
        d_t = np.stack([-ch * np.sin(t), ch * np.cos(t), np.zeros_like(v)], axis=1)
        return np.stack([d_v, d_t], axis=1)

    return ParametricPatch(
        k=2, n=3, lower=(-vm, -np.pi), upper=(vm, np.pi),
        embed_fn=embed, jacobian_fn=jac, label=label, periodic=(False, True), minimal=True,
        curvature_bound=0.0,
    )


def helicoid(pitch: float = 0.5, half_width: float = 1.1, label: str = "helicoid") -> ParametricPatch:
    """螺旋面 x = (v cosθ, v sinθ, bθ)，|v| ≤ w，|bθ| ≤ w。"""
    b = float(pitch)
    w = float(half_width)

    def embed(u: np.ndarray) -> np.ndarray:
        v, t = u[:, 0], u[:, 1]
        return np.stack([v * np.cos(t), v * np.sin(t), b * t], axis=1)

    def jac(u: np.ndarray) -> np.ndarray:
        v, t = u[:, 0], u[:, 1]
        d_v = np.stack([np.cos(t), np.sin(t), np.zeros_like(v)], axis=1)
        d_t = np.stack([-v * np.sin(t), v * np.cos(t), np.full_like(v, b)], axis=1)
        return np.stack([d_v, d_t], axis=1)

    return ParametricPatch(
        k=2, n=3, lower=(-w, -w / b), upper=(w, w / b),
        embed_fn=embed, jacobian_fn=jac, label=label, periodic=(False, False), minimal=True,
        curvature_bound=0.0,
    )


# ========= 非紧曲面（按窗口取卡） =========

@dataclass(frozen=True)
class PlaneSurface:
    """R³ 中过 point、法向 normal 的平面"""
    point: tuple[float, ...]
    normal: tuple[float, ...]
    label: str = "plane"
    k: int = 2
    n: int = 3
    default_radius: float = 10.0

    def chart(self, centre: Optional[np.ndarray] = None, radius: Optional[float] = None) -> ParametricPatch:
        p = real_vec(self.point, 3)
        nrm = real_vec(self.normal, 3)
        nrm = nrm / np.linalg.norm(nrm)
        basis = orthonormal_complement(nrm)
        c = p if centre is None else real_vec(centre, 3)
        c = c - np.dot(c - p, nrm) * nrm
        return flat_disk(c, basis[0], basis[1], radius or self.default_radius, label=self.label)


@dataclass(frozen=True)
class CylinderSurface:
    """轴为 e₃、过 base 的圆柱 S¹(R) × R"""
    radius: float
    base: tuple[float, ...] = (0.0, 0.0, 0.0)
    label: str = "cylinder"
    k: int = 2
    n: int = 3
    default_half_length: float = 10.0

    def chart(self, centre: Optional[np.ndarray] = None, radius: Optional[float] = None) -> ParametricPatch:
        R = float(self.radius)
        b = real_vec(self.base, 3)
        zc = b[2] if centre is None else float(real_vec(centre, 3)[2])
        half = radius or self.default_half_length

        def embed(u: np.ndarray) -> np.ndarray:
            t, z = u[:, 0], u[:, 1]
            return np.stack([b[0] + R * np.cos(t), b[1] + R * np.sin(t), z], axis=1)

        def jac(u: np.ndarray) -> np.ndarray:
            t = u[:, 0]
            d_t = np.stack([-R * np.sin(t), R * np.cos(t), np.zeros_like(t)], axis=1)
            d_z = np.broadcast_to(np.array([0.0, 0.0, 1.0]), d_t.shape)
            return np.stack([d_t, d_z], axis=1)

        def mean_curvature(u: np.ndarray) -> np.ndarray:
            t = u[:, 0]
            return -(1.0 / R) * np.stack([np.cos(t), np.sin(t), np.zeros_like(t)], axis=1)

        return ParametricPatch(
            k=2, n=3, lower=(-np.pi, zc - half), upper=(np.pi, zc + half),
            embed_fn=embed, jacobian_fn=jac, mean_curvature_fn=mean_curvature,
            label=self.label, periodic=(True, False), curvature_bound=1.0 / R,
        )
