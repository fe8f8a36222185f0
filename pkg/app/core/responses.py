from typing import Any, Optional
from pydantic import BaseModel

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/12 下午6:21
@desc: 定义统一命令行输出结构及成功/失败辅助方法，所有子命令的判定结果都以该信封打印到 stdout。
"""
class CliResponse(BaseModel):
    """
    所有命令统一输出结构：
    {
      "code": 0,
      "msg": "ok",
      "exit_code": 0,
      "data": ...
    }
    """
    code: int = 0
    msg: str = "ok"
    exit_code: int = 0
    data: Optional[Any] = None


def success(data: Any | None = None, msg: str = "ok") -> CliResponse:
    """
    判定全部通过时调用：
        return success(verdict.model_dump())
    """
    return CliResponse(code=0, msg=msg, exit_code=0, data=data)


def fail(code: int = -1, msg: str = "error", data: Any | None = None, exit_code: int = 1) -> CliResponse:
    """
    判定失败/异常时统一用这个结构，通常在全局异常处理里调用。
    """
    return CliResponse(code=code, msg=msg, exit_code=exit_code, data=data)
