# encoding: utf-8
import click

from app.api.commands.common import execute, experiment_options, flow_choice, flow_options
from app.core.consts import CommandEnum

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 下午2:30
@desc: mcf-mono：平均曲率流上中心沿路径移动的高斯密度恒等式与修正量单调性。
"""


@click.command(CommandEnum.MCF_MONO.value)
@flow_choice
@click.option("--normal", default=None, help="plane 流的法向")
@flow_options
@experiment_options
def mcf_mono(**params):
    execute(CommandEnum.MCF_MONO, params)
