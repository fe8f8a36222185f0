# encoding: utf-8

from dataclasses import dataclass

import numpy as np
import pytest

from app.core.exceptions import DomainError, ToleranceNotMetError
from app.infra.implicit_quadrature import integrate_band
from app.infra.level_curve import extract_level_polyline, integrate_polyline
from app.models.patch import flat_box, flat_disk, sphere
from app.schemas.quadrature import QuadratureSpec
from app.services.geometry_service import (
    SquaredDistance,
    classical_area_ratio,
    integrate_level_curve,
    integrate_sublevel,
    normal_part,
    surface_area,
    tangential_part,
)

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 下午5:05
@desc: 子水平集求积、水平曲线积分与切/法分解的闭式校验。
"""


@dataclass
class RadialLevel:
    """φ(u) = |u|²"""

    def value(self, u: np.ndarray) -> np.ndarray:
        return np.sum(u * u, axis=1)

    def value_and_gradient(self, u: np.ndarray):
        return np.sum(u * u, axis=1), 2.0 * u


def _unit_disk():
    return flat_disk(np.zeros(3), np.eye(3)[0], np.eye(3)[1], 1.0)


def test_band_on_square(spec):
    """带 1/4 < |u|² < 1 的面积为 3π/4"""
    res = integrate_band(RadialLevel(), lambda u: np.ones(u.shape[0]), -np.ones(2), np.ones(2), 0.25, 1.0, spec)
    assert res.value == pytest.approx(0.75 * np.pi, rel=1e-8)
    assert res.error_bound < 1e-6


def test_band_tolerance_is_enforced():
    tight = QuadratureSpec(cells_per_axis=2, order=3, refinement_depth=0, tolerance=1e-300)
    with pytest.raises(ToleranceNotMetError) as exc:
        integrate_band(RadialLevel(), lambda u: np.ones(u.shape[0]), -np.ones(2), np.ones(2), -np.inf, 0.5, tight)
    assert "bound" in exc.value.data


def test_polyline_circumference():
    poly = extract_level_polyline(RadialLevel(), -np.ones(2), np.ones(2), 0.25, grid=32)
    length = integrate_polyline(RadialLevel(), poly, lambda u, du: np.linalg.norm(du, axis=1), order=6)
    assert length == pytest.approx(np.pi, rel=1e-10)


def test_disk_sublevel_area(spec):
    res = integrate_sublevel(_unit_disk(), SquaredDistance(np.zeros(3)), 0.25, spec=spec)
    assert res.value == pytest.approx(0.25 * np.pi, rel=1e-10)


def test_classical_ratio_on_plane(spec):
    assert classical_area_ratio(_unit_disk(), 0.5, spec) == pytest.approx(np.pi, rel=1e-10)


def test_sphere_area_and_cap(spec):
    """单位球面上 |x - e₃|² < c 的帽面积为 πc"""
    patch = sphere(np.zeros(3), 1.0)
    assert surface_area(patch, spec).value == pytest.approx(4 * np.pi, rel=1e-10)
    cap = integrate_sublevel(patch, SquaredDistance(np.array([0.0, 0.0, 1.0])), 0.5, spec=spec)
    assert cap.value == pytest.approx(0.5 * np.pi, rel=1e-8)


def test_sphere_level_curve_length(spec):
    patch = sphere(np.zeros(3), 1.0)
    length = integrate_level_curve(patch, SquaredDistance(np.array([0.0, 0.0, 1.0])), 0.5, spec=spec)
    assert length == pytest.approx(2 * np.pi * np.sqrt(1 - 0.75 ** 2), rel=1e-8)


def test_weighted_sublevel(spec):
    """∫_{|x|<1} |x|² dA = π/2"""
    res = integrate_sublevel(_unit_disk(), SquaredDistance(np.zeros(3)), 1.0 - 1e-9,
                             integrand=lambda pts: np.sum(pts.x ** 2, axis=1), spec=spec)
    assert res.value == pytest.approx(0.5 * np.pi, rel=1e-7)


def test_level_curve_needs_surfaces():
    box = flat_box(np.zeros(4), np.eye(4)[:3], 0.6)
    with pytest.raises(DomainError):
        integrate_level_curve(box, SquaredDistance(np.zeros(4)), 0.1)


def test_tangential_and_normal_parts():
    patch = _unit_disk()
    u = np.array([0.5, 0.3])
    v = np.array([1.0, 2.0, 3.0])
    assert np.allclose(tangential_part(patch, u, v), [1.0, 2.0, 0.0])
    assert np.allclose(normal_part(patch, u, v), [0.0, 0.0, 3.0])


@dataclass
class ShiftedLevel:
    """φ(u) = |u - c|²"""
    centre: np.ndarray

    def value(self, u: np.ndarray) -> np.ndarray:
        d = u - self.centre
        return np.sum(d * d, axis=1)

    def value_and_gradient(self, u: np.ndarray):
        d = u - self.centre
        return np.sum(d * d, axis=1), 2.0 * d


def _ones(u: np.ndarray) -> np.ndarray:
    return np.ones(u.shape[0])


def test_cartesian_disk_sublevel(spec):
    """直角坐标卡上 |u|² < 1/4 的面积为 π/4，水平曲线斜穿单元"""
    res = integrate_band(RadialLevel(), _ones, -np.ones(2), np.ones(2), -np.inf, 0.25, spec)
    assert abs(res.value - 0.25 * np.pi) <= 1e-8
    assert res.unresolved == 0


def test_off_centre_disk_sublevel(spec):
    level = ShiftedLevel(np.array([0.13, -0.21]))
    res = integrate_band(level, _ones, -np.ones(2), np.ones(2), -np.inf, 0.37 ** 2, spec)
    assert abs(res.value - np.pi * 0.37 ** 2) <= 1e-8
    assert res.error_bound < 1e-6


@pytest.mark.parametrize("cells", [8, 16, 32])
def test_band_converges_under_refinement(cells, spec):
    refined = spec.model_copy(update={"cells_per_axis": cells})
    res = integrate_band(RadialLevel(), _ones, -np.ones(2), np.ones(2), 0.25, 1.0, refined)
    assert abs(res.value - 0.75 * np.pi) <= 1e-8


def test_band_with_higher_order(spec):
    res = integrate_band(RadialLevel(), _ones, -np.ones(2), np.ones(2), 0.25, 1.0,
                         spec.model_copy(update={"order": 10}))
    assert abs(res.value - 0.75 * np.pi) <= 1e-8


def test_ball_volume_in_cube(spec):
    """三维直角坐标：|u - c|² < r² 的体积为 4πr³/3"""
    level = ShiftedLevel(np.array([0.1, -0.05, 0.02]))
    res = integrate_band(level, _ones, -np.ones(3), np.ones(3), -np.inf, 0.36, spec)
    assert res.value == pytest.approx(4.0 * np.pi * 0.6 ** 3 / 3.0, rel=1e-8)


def test_weighted_band_on_cut_cells(spec):
    """∫_{|u|<1/2} u₁² du = π/64"""
    res = integrate_band(RadialLevel(), lambda u: u[:, 0] ** 2, -np.ones(2), np.ones(2), -np.inf, 0.25, spec)
    assert res.value == pytest.approx(np.pi / 64.0, rel=1e-9)
