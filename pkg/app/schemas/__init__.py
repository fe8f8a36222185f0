# encoding: utf-8
"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/16 下午8:20
@desc: 求积参数、实验配置与各类报告的 Pydantic 模型。
"""
