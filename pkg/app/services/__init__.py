"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/14 上午10:00
@desc: 单调性公式的计算与判定服务。
"""
