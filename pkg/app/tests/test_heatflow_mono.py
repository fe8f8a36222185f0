# encoding: utf-8

import numpy as np
import pytest

from app.core.consts import FaultEnum
from app.core.exceptions import DomainError
from app.models.flows import ConstantPath, LinePath
from app.models.maps import HeatKernelFlow, HeatWeight, StaticLinearFlow, ZeroFlow
from app.services.heatflow_mono import (
    check_gradient_bound,
    heat_rhs,
    heat_sweep,
    weighted_energy,
    weighted_energy_dense,
)

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 下午6:25
@desc: 调和映射热流：线性解的闭式加权能量、Struwe 单调性与移动中心的修正量。
"""

A = (1.0, 0.5, -0.25)
A2 = float(np.dot(A, A))


def _weight(path=None, m=3):
    return HeatWeight(m=m, t0=0.0, path=path or ConstantPath((0.0,) * m))


@pytest.mark.parametrize("t", [-1.0, -0.5, -0.1])
def test_linear_energy(t, spec):
    """∫|a|²Φ = 4π(t0-t)|a|²"""
    energy = weighted_energy(StaticLinearFlow(a=A), _weight(), t, spec)
    assert energy.value == pytest.approx(4 * np.pi * (-t) * A2, rel=1e-12)


def test_linear_dissipation(spec):
    """2∫|a·(x-y)|²/(4τ²)Φ = 4π|a|²，恰为 -d/dt 能量"""
    dissipation, excess = heat_rhs(StaticLinearFlow(a=A), _weight(), -0.4, spec)
    assert dissipation == pytest.approx(4 * np.pi * A2, rel=1e-10)
    assert excess == 0.0


def test_linear_sweep_constant_centre(spec):
    report = heat_sweep(StaticLinearFlow(a=A), _weight(), [-1.0, -0.6, -0.2], spec)
    assert report.passed
    assert [c.name for c in report.checks] == ["differential_identity", "corrected_nonincreasing",
                                               "struwe_excess_zero"]


def test_linear_sweep_moving_centre(spec):
    path = LinePath((0.0, 0.0, 0.0), (0.0, 1.0, 0.0), 0.0)
    report = heat_sweep(StaticLinearFlow(a=A), _weight(path), [-1.0, -0.6, -0.2], spec)
    assert report.passed
    assert all(e > 0 for e in report.excess)


def test_heat_kernel_sweep(spec):
    flow = HeatKernelFlow(m=3, t_start=-1.0)
    report = heat_sweep(flow, _weight(), [-0.6, -0.4, -0.2], spec)
    assert report.passed, [c for c in report.checks if not c.passed]


def test_hermite_matches_dense_grid(spec):
    flow = HeatKernelFlow(m=3, t_start=-1.0)
    weight = _weight(LinePath((0.1, 0.0, 0.0), (0.0, 0.0, 0.5), 0.0))
    t = -0.5
    assert weighted_energy(flow, weight, t, spec).value == pytest.approx(
        weighted_energy_dense(flow, weight, t), rel=1e-8)


def test_zero_flow_has_zero_energy(spec):
    assert weighted_energy(ZeroFlow(m=3), _weight(), -0.5, spec).value == 0.0


def test_negated_rhs_is_detected(spec):
    report = heat_sweep(StaticLinearFlow(a=A), _weight(), [-1.0, -0.6, -0.2], spec, fault=FaultEnum.NEGATE_RHS)
    assert not report.checks[0].passed


def test_dimension_mismatch(spec):
    with pytest.raises(DomainError):
        weighted_energy(StaticLinearFlow(a=A), _weight(m=4), -0.5, spec)


def test_heat_kernel_before_start(spec):
    with pytest.raises(DomainError):
        weighted_energy(HeatKernelFlow(m=3, t_start=-1.0), _weight(), -1.5, spec)


def test_time_grid_must_increase(spec):
    with pytest.raises(DomainError):
        heat_sweep(StaticLinearFlow(a=A), _weight(), [-0.2, -0.6], spec)


class UnderestimatedLinearFlow(StaticLinearFlow):
    def gradient_bound(self, t: float) -> float:
        return 0.1


class UnboundedLinearFlow(StaticLinearFlow):
    def gradient_bound(self, t: float) -> float:
        return np.inf


def _heat_kernel_energy(m, sigma, tau):
    """|∇H|² = r²/(4σ²)(4πσ)^{-m} e^{-r²/(2σ)}，与 Φ 合并后 κ = στ/(2τ+σ)"""
    kappa = sigma * tau / (2 * tau + sigma)
    return ((4 * np.pi * sigma) ** (-m) * (4 * np.pi * tau) ** (-(m - 2) / 2) / (4 * sigma ** 2)
            * 2 * m * kappa * (4 * np.pi * kappa) ** (m / 2))


@pytest.mark.parametrize("t", [-0.95, -0.9, -0.5])
def test_heat_kernel_energy_closed_form(t, spec):
    flow = HeatKernelFlow(m=3, t_start=-1.0)
    expected = _heat_kernel_energy(3, t + 1.0, -t)
    assert weighted_energy(flow, _weight(), t, spec).value == pytest.approx(expected, rel=1e-10)


def test_heat_kernel_sweep_near_start(spec):
    flow = HeatKernelFlow(m=3, t_start=-1.0)
    report = heat_sweep(flow, _weight(), [-0.95, -0.9, -0.8], spec)
    assert report.passed, [c for c in report.checks if not c.passed]


def test_gradient_bound_holds_for_heat_kernel():
    flow = HeatKernelFlow(m=3, t_start=-1.0)
    for t in (-0.9, -0.5):
        assert check_gradient_bound(flow, _weight(), t) <= flow.gradient_bound(t) * (1 + 1e-9)


def test_violated_gradient_bound_raises(spec):
    with pytest.raises(DomainError) as exc:
        weighted_energy(UnderestimatedLinearFlow(a=A), _weight(), -0.5, spec)
    assert exc.value.data["bound"] == 0.1
    assert exc.value.data["sampled_max"] == pytest.approx(np.sqrt(A2))


def test_missing_gradient_bound_raises(spec):
    with pytest.raises(DomainError):
        heat_sweep(UnboundedLinearFlow(a=A), _weight(), [-1.0, -0.5], spec)
