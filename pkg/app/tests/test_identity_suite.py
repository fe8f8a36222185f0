# encoding: utf-8

import numpy as np

from app.services.identity_suite import check_coarea, check_nesting, check_paths, run_identity_suite

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 下午7:10
@desc: 随机化恒等式自检：全部通过、检查项名称唯一、同一 seed 结果可复现。
"""


def test_suite_passes_and_is_reproducible(spec):
    first = run_identity_suite(seed=7, samples=5, spec=spec)
    second = run_identity_suite(seed=7, samples=5, spec=spec)
    assert first.passed, [c for c in first.checks if not c.passed]
    names = [c.name for c in first.checks]
    assert len(names) == len(set(names))
    assert {"projection_idempotence", "ball_nesting", "stationarity", "coarea_consistency"} <= set(names)
    assert [c.worst_residual for c in first.checks] == [c.worst_residual for c in second.checks]
    assert first.grid == [float(i) for i in range(len(names))]


def test_single_checks():
    rng = np.random.default_rng(1)
    assert check_nesting(rng, 20).passed
    assert check_paths(rng, 10).passed


def test_coarea_consistency(spec):
    result = check_coarea(np.random.default_rng(2), levels=2, spec=spec)
    assert result.passed
    assert result.tolerance == 1e-3
