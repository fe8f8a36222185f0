# encoding: utf-8

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 下午4:20
@desc: 测试包初始化文件，保留为空即可。
"""
