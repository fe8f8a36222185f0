# encoding: utf-8

import numpy as np
import pytest

from app.api.schemas.common import GridSpec, format_vector, parse_vector
from app.core.consts import CommandEnum, SurfaceEnum
from app.core.exceptions import ConfigError
from app.schemas.experiment import NEAREST_ORIGIN, ExperimentConfig, VerdictRecord
from app.schemas.reports import CheckResult

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 下午6:40
@desc: ExperimentConfig 的 key = value 文本格式：规范输出、逐字节往返与带行号的诊断。
"""

SAMPLE = """\
# catenoid around its neck
command = min-mono
surface = catenoid
y = on-surface-nearest-origin

s = 0.05:0.45:4
tol = 0.001
"""


def test_parse_sample():
    cfg = ExperimentConfig.from_text(SAMPLE)
    assert cfg.command == CommandEnum.MIN_MONO
    assert cfg.surface == SurfaceEnum.CATENOID
    assert cfg.y == NEAREST_ORIGIN
    assert np.allclose(cfg.s.values(), [0.05, 0.05 + 0.4 / 3, 0.05 + 0.8 / 3, 0.45])
    assert cfg.tol == 0.001


def test_canonical_text_round_trip():
    cfg = ExperimentConfig.from_text(SAMPLE)
    text = cfg.to_text()
    again = ExperimentConfig.from_text(text)
    assert again == cfg
    assert again.to_text() == text


def test_canonical_text_layout():
    cfg = ExperimentConfig(command="pharm-mono", map="linear", y="0.1,0,0.2", q=1.5)
    lines = cfg.to_text().splitlines()
    assert lines[0] == "command = pharm-mono"
    assert "y = 0.1,0.0,0.2" in lines
    assert "q = 1.5" in lines
    # None 字段不输出
    assert not any(line.startswith("c_h") for line in lines)


def test_unknown_key_reports_line():
    with pytest.raises(ConfigError) as exc:
        ExperimentConfig.from_text("command = entropy\n\nbogus = 1\n")
    assert exc.value.data["line"] == 3
    assert "line 3" in exc.value.msg


def test_duplicate_key():
    with pytest.raises(ConfigError) as exc:
        ExperimentConfig.from_text("command = entropy\na = 0.1\na = 0.2\n")
    assert exc.value.data == {"line": 3, "key": "a"}


def test_missing_equals():
    with pytest.raises(ConfigError) as exc:
        ExperimentConfig.from_text("command = entropy\nsurface catenoid\n")
    assert exc.value.data["line"] == 2


def test_invalid_value_reports_field_and_line():
    with pytest.raises(ConfigError) as exc:
        ExperimentConfig.from_text("command = min-mono\nneck = -1\n")
    assert exc.value.msg.startswith("line 2: invalid value for 'neck'")
    assert exc.value.data[0]["field"] == "neck"


def test_dashed_keys_are_accepted():
    cfg = ExperimentConfig.from_text("command = min-mono\ntilt-deg = 45\n")
    assert cfg.tilt_deg == 45.0


def test_grid_spec_parse():
    grid = GridSpec.parse("1e-3:1:4:geom")
    assert np.allclose(grid.values(), [1e-3, 1e-2, 1e-1, 1.0])
    assert grid.text() == "0.001:1.0:4:geom"
    assert GridSpec.parse("0.5:0.5:1").values().tolist() == [0.5]


@pytest.mark.parametrize("text", ["1:0:5", "0:1:5:geom", "a:b:3", "0:1", "0:1:0"])
def test_grid_spec_rejects(text):
    with pytest.raises(ConfigError):
        GridSpec.parse(text)


def test_vectors():
    assert parse_vector(" 0.5, 0 ,-1e-3") == (0.5, 0.0, -0.001)
    assert format_vector((0.1, 2.0)) == "0.1,2.0"
    with pytest.raises(ConfigError):
        parse_vector("0.5,x")
    with pytest.raises(ConfigError):
        parse_vector("nan,0")


def test_verdict_record_from_checks():
    checks = [
        CheckResult.from_residuals("monotone", [None, 0.0, 1e-9], 1e-8, [0.1, 0.2, 0.3]),
        CheckResult.from_residuals("identity", [1e-4, 2e-3], 1e-3, [0.1, 0.2]),
    ]
    record = VerdictRecord.from_checks("abc", "min-mono", checks, 1e-9)
    assert not record.passed
    assert record.worst_residual == 2e-3
    assert checks[1].worst_at == 0.2
    assert checks[0].passed
