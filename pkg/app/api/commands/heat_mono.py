# encoding: utf-8
import click

from app.api.commands.common import execute, experiment_options, flow_options
from app.core.consts import CommandEnum, HeatFlowEnum

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 下午2:45
@desc: heat-mono：调和映射热流的移动中心加权能量恒等式与修正量单调性。
"""


@click.command(CommandEnum.HEAT_MONO.value)
@click.option("--heat-flow", type=click.Choice([e.value for e in HeatFlowEnum]), default=None)
@click.option("--heat-a", default=None, help="linear 流的系数向量 a")
@click.option("--m", type=int, default=None, help="定义域维数")
@click.option("--t-start", type=float, default=None, help="heat-kernel 流的起始时刻")
@flow_options
@experiment_options
def heat_mono(**params):
    execute(CommandEnum.HEAT_MONO, params)
