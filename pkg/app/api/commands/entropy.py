# encoding: utf-8
import click

from app.api.commands.common import execute, experiment_options, flow_choice
from app.core.consts import CommandEnum

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 下午2:35
@desc: entropy：self-shrinker 上 F(s) = F_{sy,1+as²} 的单调性扫描。
"""


@click.command(CommandEnum.ENTROPY.value)
@flow_choice
@click.option("--normal", default=None, help="plane shrinker 的法向")
@click.option("--y", default=None, help="中心方向 y")
@click.option("--a", type=float, default=None, help="尺度系数，1+as² > 0")
@click.option("--s", default=None, help="s 网格 start:stop:count[:lin|geom]")
@experiment_options
def entropy(**params):
    execute(CommandEnum.ENTROPY, params)
