# encoding: utf-8

import numpy as np
import pytest

from app.infra.quadrature import (
    gauss_interval,
    gauss_jacobi01,
    gauss_legendre01,
    hermite_rule,
    integrate_box,
    integrate_box_faces,
    sphere_rule,
)

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 下午4:30
@desc: 基础求积规则的精度测试。
"""


def test_gauss_legendre_exact_for_polynomials():
    """order 点规则对 2·order-1 次多项式精确"""
    x, w = gauss_legendre01(3)
    assert np.sum(w * x ** 5) == pytest.approx(1.0 / 6.0, abs=1e-15)
    assert np.sum(w) == pytest.approx(1.0, abs=1e-15)


def test_gauss_jacobi_weight():
    x, w = gauss_jacobi01(6, 1.5)
    # ∫_0^1 t^1.5 t^2 dt = 1/4.5
    assert np.sum(w * x ** 2) == pytest.approx(1.0 / 4.5, rel=1e-13)


def test_integrate_box_quadratic():
    value = integrate_box(lambda p: np.sum(p * p, axis=1), np.zeros(2), np.ones(2), cells=3, order=4)
    assert value == pytest.approx(2.0 / 3.0, rel=1e-13)


def test_divergence_theorem_on_box():
    """∫ div V = ∮ V·ν，V = (x², xy, z)"""
    lo, hi = np.array([0.5, -0.5, -0.5]), np.array([1.5, 0.5, 0.5])
    bulk = integrate_box(lambda p: 2 * p[:, 0] + p[:, 0] + 1.0, lo, hi, 2, 4)

    def flux(p, nu):
        v = np.stack([p[:, 0] ** 2, p[:, 0] * p[:, 1], p[:, 2]], axis=1)
        return np.sum(v * nu, axis=1)

    assert integrate_box_faces(flux, lo, hi, 2, 4) == pytest.approx(bulk, rel=1e-12)


@pytest.mark.parametrize("dim", [1, 2, 3])
def test_hermite_total_mass(dim):
    _, w = hermite_rule(20, dim)
    assert np.sum(w) == pytest.approx(np.pi ** (0.5 * dim), rel=1e-12)


@pytest.mark.parametrize("m, area", [(2, 2 * np.pi), (3, 4 * np.pi), (4, 2 * np.pi ** 2)])
def test_sphere_rule_area(m, area):
    _, w = sphere_rule(m, 12, 24)
    assert np.sum(w) == pytest.approx(area, rel=1e-12)


def test_sphere_rule_second_moment():
    """∫_{S²} ω₁² = 4π/3"""
    omega, w = sphere_rule(3, 12, 24)
    assert np.sum(w * omega[:, 0] ** 2) == pytest.approx(4 * np.pi / 3, rel=1e-12)


def test_gauss_interval():
    assert gauss_interval(np.exp, 0.0, 1.0, 10) == pytest.approx(np.e - 1.0, rel=1e-14)
