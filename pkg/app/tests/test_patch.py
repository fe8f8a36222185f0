# encoding: utf-8

import numpy as np
import pytest

from app.core.exceptions import DomainError, SingularChartError
from app.models.patch import (
    CylinderSurface,
    PlaneSurface,
    catenoid,
    flat_box,
    flat_disk,
    flat_disk_in_unit_ball,
    helicoid,
    plane_pair,
    sphere,
    spherical_cap,
    tilted_plane,
)

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 下午4:40
@desc: 参数曲面目录的几何量测试：投影、Jacobian、平均曲率与边界采样。
"""


def _interior(patch, rng, count=32):
    span = patch.hi - patch.lo
    return patch.lo + 0.05 * span + rng.random((count, patch.k)) * 0.9 * span


@pytest.mark.parametrize("make", [
    lambda: catenoid(0.5),
    lambda: helicoid(0.5),
    lambda: sphere(np.zeros(3), 1.3),
    lambda: spherical_cap(np.array([0.3, 0.0, 0.0]), 2.0),
    lambda: tilted_plane(np.array([0.3, 0.0, 0.0]), 30.0),
])
def test_jacobian_matches_finite_differences(make, rng):
    patch = make()
    u = _interior(patch, rng)
    jac = patch.jacobian(u)
    h = 1e-6
    for i in range(patch.k):
        step = np.zeros(patch.k)
        step[i] = h
        fd = (patch.embed(u + step) - patch.embed(u - step)) / (2 * h)
        assert np.max(np.abs(fd - jac[:, i, :])) < 1e-7


def test_projections_are_complementary(rng):
    patch = catenoid(0.5)
    pts = patch.points(_interior(patch, rng))
    v = rng.normal(size=pts.x.shape)
    vt, vn = pts.tangential(v), pts.normal(v)
    assert np.allclose(vt + vn, v, atol=1e-13)
    assert np.allclose(pts.tangential(vt), vt, atol=1e-12)
    # 法向分量与所有切向量正交
    assert np.max(np.abs(np.einsum("nid,nd->ni", pts.jac, vn))) < 1e-12


def test_sphere_mean_curvature_points_inward(rng):
    centre = np.array([0.1, -0.2, 0.3])
    patch = sphere(centre, 2.0)
    u = _interior(patch, rng)
    h = patch.mean_curvature(u)
    x = patch.embed(u)
    assert np.allclose(np.linalg.norm(h, axis=1), 1.0, atol=1e-12)
    assert np.all(np.sum(h * (x - centre), axis=1) < 0)


def test_minimal_patch_has_zero_mean_curvature(rng):
    patch = helicoid(0.5)
    assert np.all(patch.mean_curvature(_interior(patch, rng)) == 0.0)


def test_flat_box_in_r4():
    patch = flat_box(np.zeros(4), np.eye(4)[:3], 0.6)
    assert (patch.k, patch.n) == (3, 4)
    pts = patch.points(np.array([[0.1, 0.2, 0.3]]))
    assert pts.area[0] == pytest.approx(1.0)
    assert np.allclose(pts.normal(np.ones(4)), [0, 0, 0, 1])


def test_degenerate_chart_raises():
    patch = flat_disk(np.zeros(3), np.eye(3)[0], np.eye(3)[1], 1.0)
    with pytest.raises(SingularChartError):
        _ = patch.points(np.array([[0.0, 0.3]])).area


def test_boundary_samples_skip_periodic_and_interior_faces():
    patch = flat_disk(np.zeros(3), np.eye(3)[0], np.eye(3)[1], 1.0)
    u = patch.boundary_samples(per_side=16)
    # 只剩 r = R 一条边
    assert u.shape == (16, 2)
    assert np.all(u[:, 0] == 1.0)


def test_flat_disk_centred_at_projection_of_y():
    y = np.array([0.0, 0.0, 0.8])
    patch = flat_disk_in_unit_ball(y, y, y)
    assert np.allclose(patch.embed(np.array([[1e-9, 0.0]])), [y], atol=1e-8)
    assert patch.hi[0] > 0.6


def test_flat_disk_falls_back_to_foot_when_y_lies_in_plane():
    """y 在平面内时以原点投影为圆心，边界在单位球外且在叶状半空间内"""
    y = np.array([0.5, 0.0, 0.0])
    patch = flat_disk_in_unit_ball(np.zeros(3), np.array([0.0, 0.0, 1.0]), y)
    rim = patch.embed(patch.boundary_samples(per_side=64))
    assert np.all(np.linalg.norm(rim, axis=1) > 1.0)
    assert np.all(rim @ y < 0.5 * (1.0 + y @ y))


def test_flat_disk_missing_ball_raises():
    with pytest.raises(DomainError):
        flat_disk_in_unit_ball(np.array([0.0, 0.0, 1.5]), np.array([0.0, 0.0, 1.0]), np.zeros(3))


def test_plane_pair_is_atlas():
    atlas = plane_pair(np.zeros(3), (np.eye(3)[2], np.eye(3)[0]))
    assert len(atlas.patches) == 2
    assert atlas.minimal and atlas.k == 2


def test_noncompact_windows():
    plane = PlaneSurface(point=(0.0, 0.0, 1.0), normal=(0.0, 0.0, 1.0))
    chart = plane.chart(centre=np.array([3.0, 0.0, 0.0]), radius=2.0)
    assert np.allclose(chart.embed(np.array([[0.0, 0.0]])), [[3.0, 0.0, 1.0]])

    cyl = CylinderSurface(radius=np.sqrt(2.0)).chart(radius=5.0)
    u = np.array([[0.3, 1.0]])
    assert np.linalg.norm(cyl.mean_curvature(u)) == pytest.approx(1.0 / np.sqrt(2.0))
