# encoding: utf-8

import pytest

from app.core.exceptions import (
    BoundaryContactError,
    ConfigError,
    DomainError,
    ErrorCode,
    ExtrapolationError,
    MonoException,
    OutsideFoliationError,
    SingularChartError,
    ToleranceNotMetError,
    VerdictFailure,
    exit_code_for,
)
from app.core.responses import fail, success

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 下午7:15
@desc: 错误码分段与进程退出码映射。
"""


@pytest.mark.parametrize("code, exit_code", [
    (ErrorCode.SUCCESS, 0),
    (ErrorCode.VERDICT_FAILURE, 2),
    (ErrorCode.CONFIG_ERROR, 3),
    (ErrorCode.BOUNDARY_CONTACT, 3),
    (ErrorCode.QUADRATURE_TOLERANCE, 4),
    (ErrorCode.EXTRAPOLATION, 4),
    (ErrorCode.INTERNAL_ERROR, 1),
    (12345, 1),
])
def test_exit_code_for(code, exit_code):
    assert exit_code_for(code) == exit_code


@pytest.mark.parametrize("exc_cls, code, exit_code", [
    (VerdictFailure, ErrorCode.VERDICT_FAILURE, 2),
    (ConfigError, ErrorCode.CONFIG_ERROR, 3),
    (DomainError, ErrorCode.DOMAIN_ERROR, 3),
    (OutsideFoliationError, ErrorCode.OUTSIDE_FOLIATION, 3),
    (BoundaryContactError, ErrorCode.BOUNDARY_CONTACT, 3),
    (ToleranceNotMetError, ErrorCode.QUADRATURE_TOLERANCE, 4),
    (SingularChartError, ErrorCode.SINGULAR_CHART, 4),
    (ExtrapolationError, ErrorCode.EXTRAPOLATION, 4),
])
def test_exception_codes(exc_cls, code, exit_code):
    exc = exc_cls("boom", data={"k": 1})
    assert exc.code == code
    assert exc.exit_code == exit_code
    assert str(exc) == f"[{int(code)}] boom"


def test_domain_errors_are_catchable_together():
    with pytest.raises(DomainError):
        raise OutsideFoliationError("x outside")


def test_explicit_code_overrides_default():
    exc = MonoException("custom", code=ErrorCode.DOMAIN_ERROR)
    assert exc.exit_code == 3


def test_response_envelope():
    assert success({"a": 1}).model_dump() == {"code": 0, "msg": "ok", "exit_code": 0, "data": {"a": 1}}
    resp = fail(code=ErrorCode.CONFIG_ERROR, msg="bad", exit_code=3)
    assert (resp.code, resp.exit_code, resp.data) == (30000, 3, None)
