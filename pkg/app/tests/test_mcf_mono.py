# encoding: utf-8

import numpy as np
import pytest

from app.core.consts import FaultEnum
from app.core.exceptions import DomainError
from app.models.flows import (
    CirclePath,
    ConstantPath,
    GaussianWeight,
    LinePath,
    ShrinkingCylinderFlow,
    ShrinkingSphereFlow,
    StaticPlaneFlow,
)
from app.models.patch import PlaneSurface, sphere
from app.services.mcf_mono import (
    check_shrinker,
    corrected_quantity,
    entropy_scan,
    gaussian_density,
    mcf_rhs,
    mcf_sweep,
    moving_density,
)

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 下午5:40
@desc: 平均曲率流：高斯密度闭式值、移动中心单调性、平面沿法向平移中心时修正量恒为 1，
       以及自收缩子的熵扫描。
"""

TIMES = [-1.0, -0.7, -0.4, -0.1]


def test_plane_density_is_one(spec):
    plane = PlaneSurface(point=(0.0, 0.0, 0.0), normal=(0.0, 0.0, 1.0))
    assert gaussian_density(plane, np.array([0.3, -0.2, 0.0]), 0.7, spec).value == pytest.approx(1.0, rel=1e-10)


def test_shrinking_sphere_density(spec):
    """Huisken：R² = 4(t0-t) 时 ∫Φ = 4/e"""
    flow = ShrinkingSphereFlow(t0=0.0, k=2)
    weight = GaussianWeight(k=2, t0=0.0, path=ConstantPath((0.0, 0.0, 0.0)))
    for t in (-1.0, -0.3):
        assert moving_density(flow, weight, t, spec).value == pytest.approx(4.0 / np.e, rel=1e-10)


def test_static_plane_with_constant_centre(spec):
    flow = StaticPlaneFlow()
    weight = GaussianWeight(k=2, t0=0.0, path=ConstantPath((0.0, 0.0, 0.0)))
    report = mcf_sweep(flow, weight, TIMES, spec)
    assert report.passed
    assert [c.name for c in report.checks] == ["differential_identity", "corrected_nonincreasing",
                                               "huisken_excess_zero"]
    assert np.allclose(report.corrected_quantity, 1.0, rtol=1e-10)


def test_plane_with_centre_moving_along_normal(spec):
    """y(t) = (t0-t)ν：∫Φ = exp(-τ|ν|²/4)，乘以修正因子后恒为 1"""
    flow = StaticPlaneFlow()
    weight = GaussianWeight(k=2, t0=0.0, path=LinePath((0.0, 0.0, 0.0), (0.0, 0.0, 1.0), 0.0))
    report = mcf_sweep(flow, weight, TIMES, spec)
    assert report.passed
    for t, dens in zip(TIMES, report.density):
        assert dens == pytest.approx(np.exp(0.25 * t), rel=1e-9)
    assert np.allclose(report.corrected_quantity, 1.0, rtol=1e-9)


def test_dissipation_and_excess_on_plane(spec):
    """平面上 H = 0 且 (x-y)^⊥ 为常向量"""
    flow = StaticPlaneFlow()
    weight = GaussianWeight(k=2, t0=0.0, path=LinePath((0.0, 0.0, 0.0), (0.0, 0.0, 1.0), 0.0))
    dissipation, excess = mcf_rhs(flow, weight, -0.5, spec)
    # y' = -ν，excess = ¼∫|ν|²Φ
    assert excess == pytest.approx(0.25 * np.exp(-0.125), rel=1e-9)
    assert dissipation == pytest.approx(0.0, abs=1e-12)


def test_cylinder_with_circle_path(spec):
    flow = ShrinkingCylinderFlow(t0=0.0)
    weight = GaussianWeight(k=2, t0=0.0, path=CirclePath(0.1, ambient=3))
    report = mcf_sweep(flow, weight, [-1.0, -0.6, -0.3], spec)
    assert report.passed, [c for c in report.checks if not c.passed]
    assert all(e > 0 for e in report.excess)


def test_negated_rhs_is_detected(spec):
    flow = StaticPlaneFlow()
    weight = GaussianWeight(k=2, t0=0.0, path=LinePath((0.0, 0.0, 0.0), (0.0, 0.0, 1.0), 0.0))
    report = mcf_sweep(flow, weight, TIMES, spec, fault=FaultEnum.NEGATE_RHS)
    assert not report.passed
    assert not report.checks[0].passed


def test_corrected_quantity_uses_path_energy(spec):
    flow = StaticPlaneFlow()
    weight = GaussianWeight(k=2, t0=0.0, path=LinePath((0.0, 0.0, 0.0), (0.0, 0.0, 2.0), 0.0))
    # exp(¼·4·0.5)·exp(-0.5·4/4)
    assert corrected_quantity(flow, weight, -0.5, spec) == pytest.approx(1.0, rel=1e-9)


def test_time_after_singularity_raises(spec):
    flow = ShrinkingSphereFlow(t0=0.0, k=2)
    weight = GaussianWeight(k=2, t0=0.0, path=ConstantPath((0.0, 0.0, 0.0)))
    with pytest.raises(DomainError):
        moving_density(flow, weight, 0.0, spec)


def test_circle_entropy_at_origin(spec):
    """S¹(√2)：F(0) = √(2π/e)"""
    shrinker = ShrinkingSphereFlow(centre=(0.0, 0.0), k=1).surface(-1.0)
    report = entropy_scan(shrinker, np.array([0.3, 0.1]), 0.0, [0.0, 0.5, 1.0], spec)
    assert report.entropy[0] == pytest.approx(np.sqrt(2 * np.pi / np.e), rel=1e-10)
    assert report.passed
    assert all(b <= a + 1e-12 for a, b in zip(report.entropy[:-1], report.entropy[1:]))


def test_sphere_entropy_with_scaling(spec):
    shrinker = ShrinkingSphereFlow(k=2).surface(-1.0)
    report = entropy_scan(shrinker, np.array([0.2, 0.0, 0.1]), 0.5, [0.0, 0.3, 0.8], spec)
    assert report.entropy[0] == pytest.approx(4.0 / np.e, rel=1e-10)
    assert report.passed


def test_cylinder_is_shrinker(spec):
    assert check_shrinker(ShrinkingCylinderFlow().surface(-1.0), spec) < 1e-10


@pytest.mark.parametrize("surface", [
    sphere(np.zeros(3), 1.0),
    PlaneSurface(point=(0.0, 0.0, 1.0), normal=(0.0, 0.0, 1.0)),
])
def test_non_shrinker_rejected(surface, spec):
    with pytest.raises(DomainError):
        entropy_scan(surface, np.zeros(3), 0.0, [0.0, 0.5], spec)


FLOWS = [StaticPlaneFlow(), ShrinkingSphereFlow(t0=0.0, k=2), ShrinkingCylinderFlow(t0=0.0)]
PATHS = [ConstantPath((0.0, 0.0, 0.0)), LinePath((0.0, 0.0, 0.0), (0.2, 0.1, 0.0), 0.0), CirclePath(0.1, ambient=3)]


@pytest.mark.parametrize("path", PATHS, ids=["constant", "line", "circle"])
@pytest.mark.parametrize("flow", FLOWS, ids=["plane", "sphere", "cylinder"])
def test_flow_path_matrix(flow, path, spec):
    weight = GaussianWeight(k=2, t0=0.0, path=path)
    report = mcf_sweep(flow, weight, [-1.0, -0.6, -0.3], spec)
    assert report.passed, [c for c in report.checks if not c.passed]
    assert all(b <= a + 1e-12 for a, b in zip(report.corrected_quantity[:-1], report.corrected_quantity[1:]))


@pytest.mark.parametrize("y", [(0.3, 0.0), (0.3, 0.1)])
@pytest.mark.parametrize("a", [-0.25, 0.0, 0.5])
def test_circle_entropy_matrix(a, y, spec):
    shrinker = ShrinkingSphereFlow(centre=(0.0, 0.0), k=1).surface(-1.0)
    report = entropy_scan(shrinker, np.array(y), a, [0.0, 0.5, 1.0], spec)
    assert report.passed, [c for c in report.checks if not c.passed]
    assert all(r <= 0.0 for r in report.rhs)
    assert all(b <= a_ + 1e-12 for a_, b in zip(report.entropy[:-1], report.entropy[1:]))
