# encoding: utf-8
import click

from app.api.commands.common import execute, experiment_options, surface_options
from app.core.consts import CommandEnum

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 下午2:20
@desc: min-mono：极小曲面上移动中心球族的面积比单调性（微分/积分恒等式），非极小曲面走几乎单调校正。
"""


@click.command(CommandEnum.MIN_MONO.value)
@surface_options
@click.option("--c-h", type=float, default=None, help="|H| 上界，缺省取曲面目录给出的值")
@experiment_options
def min_mono(**params):
    """
    扫描 s 网格上的面积比 s^{-k/2}|Σ∩E_s|。
    """
    execute(CommandEnum.MIN_MONO, params)
