# encoding: utf-8

import numpy as np
import pytest

from app.core.consts import FaultEnum
from app.core.exceptions import BoundaryContactError, DomainError, ToleranceNotMetError
from app.models.ball_family import MinimalBallFamily
from app.models.patch import catenoid, flat_disk_in_unit_ball, plane_pair, spherical_cap, tilted_plane
from app.services.geometry_service import classical_area_ratio
from app.services.minimal_mono import (
    almost_mono_factor,
    area_ratio,
    boundary_flux,
    bh_field_identity,
    brendle_hung_check,
    bulk_increment,
    minimal_mono_sweep,
    ratio_derivative,
    richardson_sqrt,
    sample_bh_points,
    unit_ball_volume,
    with_refinement,
)

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 下午5:20
@desc: 极小曲面移动中心单调性：平面圆盘闭式值、悬链面上的恒等式、Brendle–Hung 下界、
       球冠的几乎单调性以及 W₀ 散度恒等式。
"""

CATENOID_GRID = [0.05, 0.1833, 0.3167, 0.45]


def _normal_disk(y: np.ndarray):
    normal = y / np.linalg.norm(y) if np.linalg.norm(y) > 0 else np.array([0.0, 0.0, 1.0])
    return flat_disk_in_unit_ball(y, normal, y)


@pytest.mark.parametrize("norm", [0.0, 0.3, 0.5, 0.8])
def test_flat_disk_ratio_is_constant(norm, spec):
    """法向平行于 y 的过 y 平面：s^{-1}|Σ∩E_s| ≡ π(1-|y|²)"""
    y = np.array([0.0, norm, 0.0]) if norm else np.zeros(3)
    surface, family = _normal_disk(y), MinimalBallFamily(y)
    for s in (0.01, 0.3, 1.0):
        assert area_ratio(surface, family, s, spec).value == pytest.approx(np.pi * (1 - norm ** 2), rel=1e-8)


def test_flat_disk_sweep_passes(spec):
    y = np.array([0.3, 0.0, 0.4])
    report = minimal_mono_sweep(_normal_disk(y), MinimalBallFamily(y), [0.05, 0.2, 0.5, 1.0], spec)
    assert report.passed
    assert report.verdict == "monotone"
    assert [c.name for c in report.checks] == ["monotone", "differential_identity", "flux_nonnegative",
                                               "integral_identity"]
    assert report.bulk_increment[0] is None
    assert max(abs(f) for f in report.boundary_flux) < 1e-8


def test_catenoid_identities(spec):
    y = np.array([0.5, 0.0, 0.0])
    report = minimal_mono_sweep(catenoid(0.5), MinimalBallFamily(y), CATENOID_GRID, spec)
    assert report.passed, [c for c in report.checks if not c.passed]
    assert all(b >= a for a, b in zip(report.ratio[:-1], report.ratio[1:]))
    assert min(f for f in report.boundary_flux if f is not None) > 0


def test_negated_flux_is_detected(spec):
    y = np.array([0.5, 0.0, 0.0])
    report = minimal_mono_sweep(catenoid(0.5), MinimalBallFamily(y), CATENOID_GRID, spec,
                                fault=FaultEnum.NEGATE_FLUX)
    failed = {c.name for c in report.checks if not c.passed}
    assert "differential_identity" in failed
    assert report.verdict == "violation"


def test_spherical_cap_is_almost_monotone(spec):
    y = np.array([0.3, 0.0, 0.0])
    report = minimal_mono_sweep(spherical_cap(y, 2.0), MinimalBallFamily(y), [0.05, 0.2, 0.5, 0.9], spec)
    assert [c.name for c in report.checks] == ["almost_monotone"]
    assert report.passed
    assert len(report.corrected_ratio) == 4
    assert all(f >= 1.0 for f in report.almost_factor)


def test_bh_bound_on_catenoid(spec):
    y = np.array([0.5, 0.0, 0.0])
    report = brendle_hung_check(catenoid(0.5), MinimalBallFamily(y), [0.1, 0.5, 1.0], spec)
    assert report.density == 1.0
    assert report.bound == pytest.approx(0.75 * np.pi)
    assert report.ratio_at_one > 0.75 * np.pi
    assert not report.equality
    assert report.passed


def test_bh_equality_for_plane_pair(spec):
    """过原点的两张平面：Θ = 2，s=1 处等号成立"""
    surface = plane_pair(np.zeros(3), (np.array([0.0, 0.0, 1.0]), np.array([1.0, 0.0, 0.0])))
    report = brendle_hung_check(surface, MinimalBallFamily(np.zeros(3)), [0.25, 1.0], spec)
    assert report.density == 2.0
    assert report.ratio_at_one == pytest.approx(2 * np.pi, rel=1e-8)
    assert report.equality


def test_bh_check_rejects_non_minimal(spec):
    y = np.array([0.3, 0.0, 0.0])
    with pytest.raises(DomainError):
        brendle_hung_check(spherical_cap(y, 2.0), MinimalBallFamily(y), [0.5], spec)


def test_boundary_contact(spec):
    y = np.zeros(3)
    with pytest.raises(BoundaryContactError):
        area_ratio(_normal_disk(y), MinimalBallFamily(y), 2.0, spec)


def test_bulk_increment_domain(spec):
    y = np.zeros(3)
    surface, family = _normal_disk(y), MinimalBallFamily(y)
    with pytest.raises(DomainError):
        bulk_increment(surface, family, 1e-4, 0.5, spec)
    with pytest.raises(DomainError):
        bulk_increment(surface, family, 0.5, 0.2, spec)


def test_richardson_removes_sqrt_terms():
    seq = [3.0 + 0.5 * 2.0 ** -j + 0.2 * 4.0 ** -j for j in range(3)]
    value, estimate = richardson_sqrt(seq)
    assert value == pytest.approx(3.0, abs=1e-12)
    assert estimate == pytest.approx(0.025)


def test_unit_ball_volume():
    assert unit_ball_volume(2) == pytest.approx(np.pi)
    assert unit_ball_volume(3) == pytest.approx(4 * np.pi / 3)
    assert unit_ball_volume(4) == pytest.approx(np.pi ** 2 / 2)


def test_almost_mono_factor():
    family = MinimalBallFamily(np.zeros(3))
    assert almost_mono_factor(family, 1.0, 0.25, 2) == pytest.approx(np.e)
    with pytest.raises(DomainError):
        almost_mono_factor(family, -1.0, 0.25, 2)


def test_bh_field_divergence(rng):
    patch = catenoid(0.5)
    family = MinimalBallFamily(np.array([0.5, 0.0, 0.0]))
    for u in sample_bh_points(patch, family, 10, rng):
        sample = bh_field_identity(patch, family, u)
        assert sample.analytic_error < 1e-8
        assert sample.numeric_error < 1e-5
        assert sample.div_closed_form >= 0.0


# 32 点对数网格，s ≥ 1e-3 的相邻区间都参与积分恒等式
SWEEP_GRID = list(np.geomspace(1e-3, 1.0, 32))


def test_catenoid_sweep_on_full_grid(spec):
    y = np.array([0.5, 0.0, 0.0])
    report = minimal_mono_sweep(catenoid(0.5), MinimalBallFamily(y), SWEEP_GRID, spec)
    assert report.passed, [c for c in report.checks if not c.passed]
    assert len(report.ratio) == 32
    assert report.quadrature_bound < 1e-6


def test_tilted_plane_sweep_on_full_grid(spec):
    """倾斜 30° 的过原点平面：E_s 在 s≈0.0645 之后才碰到平面，之前面积比为 0"""
    y = np.array([0.3, 0.0, 0.0])
    report = minimal_mono_sweep(tilted_plane(y, 30.0), MinimalBallFamily(y), SWEEP_GRID, spec)
    assert report.passed, [c for c in report.checks if not c.passed]
    assert report.ratio[0] == 0.0
    assert report.ratio[-1] > 0.0
    assert max(r for r in report.residual if r is not None) < 1e-3


def test_tilted_plane_near_onset(spec):
    y = np.array([0.3, 0.0, 0.0])
    surface, family = tilted_plane(y, 30.0), MinimalBallFamily(y)
    flux = boundary_flux(surface, family, 0.0862, spec)
    fd = ratio_derivative(surface, family, 0.0862, spec)
    assert flux > 0
    assert abs(fd - flux) <= 1e-3 * (1 + abs(flux))


def test_tilted_plane_integral_identity(spec):
    y = np.array([0.3, 0.0, 0.0])
    surface, family = tilted_plane(y, 30.0), MinimalBallFamily(y)
    diff = area_ratio(surface, family, 1.0, spec).value - area_ratio(surface, family, 0.25, spec).value
    assert bulk_increment(surface, family, 0.25, 1.0, spec).value == pytest.approx(diff, rel=1e-4)


def test_catenoid_area_error_bound(spec):
    y = np.array([0.5, 0.0, 0.0])
    for s in (0.01, 0.1, 0.5):
        assert area_ratio(catenoid(0.5), MinimalBallFamily(y), s, spec).error_bound < 1e-6


@pytest.mark.parametrize("surface", [
    tilted_plane(np.zeros(3), 0.0, through=np.array([0.2, 0.0, 0.0])),
    catenoid(0.5),
])
def test_centre_at_origin_is_classical_ratio(surface, spec):
    """y = 0 时 E_s = B(0,√s)，面积比退化为 r^{-k}|Σ∩B_r|"""
    family = MinimalBallFamily(np.zeros(3))
    for s in (0.3, 0.6, 0.9):
        assert area_ratio(surface, family, s, spec).value == pytest.approx(
            classical_area_ratio(surface, np.sqrt(s), spec), rel=1e-10)


def test_refinement_retries_before_failing(spec):
    calls = []

    def compute(sp):
        calls.append(sp.cells_per_axis)
        if len(calls) < 3:
            raise ToleranceNotMetError("bound too large", data={"bound": 1.0})
        return sp.cells_per_axis

    assert with_refinement(compute, spec, "area ratio", 0.1) == 4 * spec.cells_per_axis
    assert calls == [8, 16, 32]


def test_refinement_gives_up(spec):
    def compute(sp):
        raise ToleranceNotMetError("bound too large", data={"bound": 1.0})

    with pytest.raises(ToleranceNotMetError):
        with_refinement(compute, spec, "area ratio", 0.1)
