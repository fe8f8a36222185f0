# encoding: utf-8
import click

from app.api.commands.common import execute, experiment_options
from app.core.consts import CommandEnum

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 下午2:50
@desc: identity-suite：随机化恒等式自检，--seed 决定全部随机样本。
"""


@click.command(CommandEnum.IDENTITY_SUITE.value)
@click.option("--samples", type=int, default=None, help="每项逐点检查的样本数")
@experiment_options
def identity_suite(**params):
    execute(CommandEnum.IDENTITY_SUITE, params)
