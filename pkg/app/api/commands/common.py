# encoding: utf-8

import json
from functools import reduce
from typing import Any, Callable, Optional

import click
from loguru import logger

from app.core.consts import CommandEnum, FaultEnum, FlowEnum, PathEnum, SurfaceEnum
from app.core.exceptions import ConfigError, VerdictFailure
from app.schemas.experiment import ExperimentConfig
from app.services import experiment_service

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 下午2:10
@desc: 子命令共用的参数组与执行入口。

       选项默认 None（开关默认 False）：--config 文件里的键先生效，命令行显式给出的选项再覆盖；
       合并后的键值交给 ExperimentConfig 统一校验。
"""

Decorator = Callable[[Callable], Callable]


def _choice(enum_cls) -> click.Choice:
    return click.Choice([e.value for e in enum_cls])


def _stack(*options: Decorator) -> Decorator:
    """按书写顺序叠加 click 选项"""
    return lambda fn: reduce(lambda f, opt: opt(f), reversed(options), fn)


experiment_options = _stack(
    click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None,
                 help="key = value 配置文件，命令行选项覆盖其中同名键"),
    click.option("--out-csv", default=None, help="逐网格点结果 CSV"),
    click.option("--out-svg", default=None, help="单调量与残差折线图"),
    click.option("--out-json", default=None, help="判定 JSON（与 stdout 相同）"),
    click.option("--quad-cells", type=int, default=None, help="每个参数方向的初始单元数"),
    click.option("--quad-order", type=int, default=None, help="每单元每方向 Gauss 点数"),
    click.option("--quad-depth", type=int, default=None, help="自适应细化最大深度"),
    click.option("--quad-tol", type=float, default=None, help="求积误差界容差"),
    click.option("--tol", type=float, default=None, help="恒等式判定容差"),
    click.option("--seed", type=int, default=None, help="随机自检的种子"),
    click.option("--inject-fault", type=_choice(FaultEnum), default=None, hidden=True),
)

surface_options = _stack(
    click.option("--surface", type=_choice(SurfaceEnum), default=None),
    click.option("--orient-normal-to-y", is_flag=True, default=False, help="flat-disk 取法向平行于 y"),
    click.option("--normal", default=None, help="平面法向，如 0,0,1"),
    click.option("--tilt-deg", type=float, default=None),
    click.option("--neck", type=float, default=None),
    click.option("--pitch", type=float, default=None),
    click.option("--cap-radius", type=float, default=None),
    click.option("--y", default=None, help="中心 y，如 0.5,0,0 或 on-surface-nearest-origin"),
    click.option("--s", default=None, help="s 网格 start:stop:count[:lin|geom]"),
)

flow_options = _stack(
    click.option("--path", type=_choice(PathEnum), default=None),
    click.option("--x0", default=None, help="路径起点"),
    click.option("--y0", default=None, help="直线路径方向：normal / axis / 向量"),
    click.option("--path-eps", type=float, default=None),
    click.option("--t0", type=float, default=None, help="权重的奇异时刻"),
    click.option("--times", default=None, help="时间网格 start:stop:count[:lin|geom]"),
)

flow_choice = click.option("--flow", type=_choice(FlowEnum), default=None)


def load_values(config_path: Optional[str]) -> tuple[dict[str, Any], dict[str, int]]:
    if not config_path:
        return {}, {}
    with open(config_path, encoding="utf-8") as f:
        return ExperimentConfig.parse_text(f.read())


def build_config(command: CommandEnum, params: dict[str, Any]) -> ExperimentConfig:
    """文件键值 + 显式选项 → ExperimentConfig"""
    values, lines = load_values(params.pop("config_path", None))
    file_command = values.pop("command", None)
    if file_command is not None and file_command != command.value:
        raise ConfigError(f"config file is for {file_command!r}, not {command.value!r}",
                          data={"field": "command", "line": lines.get("command")})
    for name, value in params.items():
        # 未给出的选项为 None，未打开的开关为 False
        if value is None or value is False:
            continue
        values[name] = value
        lines.pop(name, None)
    values["command"] = command.value
    return ExperimentConfig.build(values, lines)


def execute(command: CommandEnum, params: dict[str, Any]) -> None:
    """
    跑一次实验并把 CliResponse 打印到 stdout；判定失败抛 VerdictFailure（退出码 2），
    交给全局异常处理输出同样的信封。
    """
    config = build_config(command, params)
    logger.debug(f"config | {config.to_text().strip()}")
    record = experiment_service.run(config)
    resp = experiment_service.verdict_response(record)
    if not record.passed:
        raise VerdictFailure(resp.msg, data=resp.data)
    click.echo(json.dumps(resp.model_dump(), ensure_ascii=False))
