import logging
import sys
from typing import Optional

from loguru import logger
from .config import settings

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/12 下午6:21
@desc: 基于 loguru 的日志配置模块。
       日志统一写到 stderr，stdout 只留给机器可读的判定信封；
       track_experiment 绑定的 experiment_id 出现在每一行里。
"""

LOG_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss.SSS}</green> | "
    "<level>{level: <8}</level> | "
    "<magenta>{extra[experiment_id]}</magenta> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - "
    "<level>{message}</level>"
)


def configure_logging(level: Optional[str] = None) -> None:
    """
    - level 缺省取 settings.logging.level（命令行 --log-level 可覆盖）
    - json_lines 打开时按 JSON 行序列化，便于批量实验归档
    - 实验之外的日志 experiment_id 显示为 "-"
    """
    logger.remove()
    logger.configure(extra={"experiment_id": "-"})

    logger.add(
        sys.stderr,
        level=(level or settings.logging.level).upper(),
        format=LOG_FORMAT,
        serialize=settings.logging.json_lines,
        backtrace=False,
        diagnose=False,
    )

    # matplotlib 的字体缓存日志走标准 logging，压到 WARNING
    logging.getLogger("matplotlib").setLevel(logging.WARNING)


def log_startup_banner() -> None:
    quad = settings.quadrature
    tol = settings.tolerances
    logger.info(
        f"App starting | name={settings.app_name} env={settings.env.value} debug={settings.debug} "
        f"quad=cells:{quad.cells_per_axis},order:{quad.order},depth:{quad.refinement_depth},"
        f"tol:{quad.tolerance:g},hermite:{quad.hermite_order} "
        f"verdict=identity:{tol.identity_rel:g},integral:{tol.integral_rel:g},slack:{tol.monotone_slack:g}"
    )
