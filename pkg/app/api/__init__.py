# encoding: utf-8

from app.api.commands import (
    bh_check,
    entropy,
    heat_mono,
    identity_suite,
    mcf_mono,
    min_mono,
    pharm_mono,
)

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 下午3:00
@desc: 聚合所有子命令，统一在 main.py 中挂到 CLI 根命令组上。
"""

api_commands = [
    min_mono.min_mono,
    bh_check.bh_check,
    mcf_mono.mcf_mono,
    entropy.entropy,
    pharm_mono.pharm_mono,
    heat_mono.heat_mono,
    identity_suite.identity_suite,
]
