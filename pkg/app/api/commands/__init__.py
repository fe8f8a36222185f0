# encoding: utf-8

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 下午2:00
@desc: 子命令模块，每个文件对应一个 mcmono 子命令。
"""
