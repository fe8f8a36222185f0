# encoding: utf-8
import click

from app.api.commands.common import execute, experiment_options, surface_options
from app.core.consts import CommandEnum

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 下午2:25
@desc: bh-check：s=1 处的面积下界与密度外推。
"""


@click.command(CommandEnum.BH_CHECK.value)
@surface_options
@click.option("--density-s-min", type=float, default=None, help="密度外推的最大采样尺度")
@click.option("--density-samples", type=int, default=None, help="外推采样个数（按 1/4 几何递减）")
@experiment_options
def bh_check(**params):
    execute(CommandEnum.BH_CHECK, params)
