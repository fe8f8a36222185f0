# encoding: utf-8
"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/16 下午8:00
@desc: 命令行公共 Schema（网格、向量）。
"""
