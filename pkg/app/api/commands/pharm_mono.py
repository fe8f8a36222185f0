# encoding: utf-8
import click

from app.api.commands.common import execute, experiment_options
from app.core.consts import CommandEnum, MapEnum

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 下午2:40
@desc: pharm-mono：平稳 p-调和映射在 q-球族上的能量比恒等式、缩放能量单调性与刚性。
"""


@click.command(CommandEnum.PHARM_MONO.value)
@click.option("--map", type=click.Choice([e.value for e in MapEnum]), default=None)
@click.option("--m", type=int, default=None, help="定义域维数")
@click.option("--p", type=float, default=None, help="p ∈ (1, m)")
@click.option("--q", type=float, default=None, help="q ∈ [1, p]")
@click.option("--y", default=None, help="中心 y")
@click.option("--s", default=None, help="s 网格 start:stop:count[:lin|geom]")
@experiment_options
def pharm_mono(**params):
    execute(CommandEnum.PHARM_MONO, params)
