# encoding: utf-8

import numpy as np
import pytest

from app.core.exceptions import DomainError, GradientUndefinedError, OutsideFoliationError
from app.models.ball_family import MinimalBallFamily, QBallFamily

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 下午4:50
@desc: 移动中心球族：定义恒等式、嵌套、闭式梯度与 q 族分支。
"""

Y = np.array([0.5, 0.2, -0.1])


def test_unit_sphere_is_level_one(rng):
    family = MinimalBallFamily(Y)
    x = rng.normal(size=(50, 3))
    x /= np.linalg.norm(x, axis=1)[:, None]
    assert np.allclose(family.values(x), 1.0, atol=1e-13)


def test_centre_is_vertex():
    family = MinimalBallFamily(Y)
    assert family.level_function(Y) == 0.0
    with pytest.raises(GradientUndefinedError):
        family.level_gradient(Y)


@pytest.mark.parametrize("s", [0.01, 0.3, 1.0, 2.5])
def test_boundary_points_lie_on_level(s, rng):
    family = MinimalBallFamily(Y)
    for direction in rng.normal(size=(10, 3)):
        x = family.boundary_point(s, direction)
        assert family.level_function(x) == pytest.approx(s, rel=1e-12)


def test_balls_are_nested():
    family = MinimalBallFamily(Y)
    prev = None
    for s in np.geomspace(1e-3, 3.0, 12):
        c, r = family.centre_and_radius(s)
        if prev is not None:
            pc, pr = prev
            # B(pc, pr) ⊂ B(c, r)
            assert np.linalg.norm(c - pc) + pr <= r + 1e-12
        prev = (c, r)


def test_gradient_matches_finite_differences(rng):
    family = MinimalBallFamily(Y)
    x = rng.normal(scale=0.4, size=(20, 3))
    _, grad = family.values_and_gradients(x)
    h = 1e-6
    for i in range(3):
        e = np.zeros(3)
        e[i] = h
        fd = (family.values(x + e) - family.values(x - e)) / (2 * h)
        assert np.allclose(fd, grad[:, i], atol=1e-7)


def test_alternate_form_agrees_inside_ball(rng):
    family = MinimalBallFamily(Y)
    x = rng.normal(scale=0.3, size=(40, 3))
    assert np.allclose(family.values(x), family.alternate_values(x), rtol=1e-12)


def test_outside_foliation_raises():
    family = MinimalBallFamily(np.array([0.5, 0.0, 0.0]))
    with pytest.raises(OutsideFoliationError):
        family.level_function(np.array([2.0, 0.0, 0.0]))


@pytest.mark.parametrize("y", [np.array([1.0, 0.0, 0.0]), np.array([0.8, 0.8, 0.0])])
def test_centre_must_lie_in_unit_ball(y):
    with pytest.raises(DomainError):
        MinimalBallFamily(y)


def test_scale_must_be_positive():
    with pytest.raises(DomainError):
        MinimalBallFamily(Y).centre_and_radius(0.0)


def test_q_family_contains_origin_and_hits_level(rng):
    family = QBallFamily(np.array([0.4, 0.1, 0.0]), q=2.0)
    for s in (0.05, 0.5, 2.0):
        c, r = family.centre_and_radius(s)
        assert np.linalg.norm(c) < r
        omega = rng.normal(size=(8, 3))
        omega /= np.linalg.norm(omega, axis=1)[:, None]
        x = family.exit_radius(s, omega)[:, None] * omega
        assert np.allclose(family.values(x), s, rtol=1e-12)
        assert np.allclose(family.defining_residual(x), 0.0, atol=1e-12)


def test_q_family_gradient_norm(rng):
    family = QBallFamily(np.array([0.3, -0.2, 0.1]), q=2.5)
    x = rng.normal(scale=0.5, size=(30, 3))
    _, grad = family.values_and_gradients(x)
    assert np.allclose(np.linalg.norm(grad, axis=1), family.gradient_norm_identity(x), rtol=1e-10)


def test_q_family_branches_agree(rng):
    family = QBallFamily(np.array([0.3, 0.2, 0.0]), q=1.5)
    x = rng.normal(scale=0.4, size=(30, 3))
    assert np.allclose(family.values(x), family.direct_values(x), rtol=1e-8)


def test_q_one_is_rigid_motion_of_minimal_family(rng):
    y = np.array([0.3, 0.2, 0.0])
    family = QBallFamily(y, q=1.0)
    partner = family.rigid_motion_partner()
    x = rng.normal(scale=0.3, size=(20, 3))
    assert np.allclose(family.values(x), partner.values(y - x), rtol=1e-11)


def test_q_family_rejects_large_centre():
    with pytest.raises(DomainError):
        QBallFamily(np.array([0.8, 0.0, 0.0]), q=2.0)
