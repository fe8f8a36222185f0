# encoding: utf-8

import json

import numpy as np
import pytest
from click.testing import CliRunner

from app.schemas.quadrature import QuadratureSpec

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 下午4:25
@desc: 公共 fixture：随机数发生器、CLI runner，以及从 stdout 取出 CliResponse 信封的辅助函数。
"""


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20261017)


@pytest.fixture
def spec() -> QuadratureSpec:
    """测试用求积参数，与默认值一致但显式给出，避免受 .env 影响"""
    return QuadratureSpec(cells_per_axis=8, order=8, refinement_depth=10, level_grid=192, tolerance=1e-6)


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def envelope(result) -> dict:
    """
    stdout 的最后一个 JSON 行即 CliResponse；日志走 stderr，这里只做兜底过滤。
    """
    lines = [line for line in result.stdout.splitlines() if line.startswith("{")]
    assert lines, f"no JSON envelope on stdout: {result.stdout!r}"
    return json.loads(lines[-1])
