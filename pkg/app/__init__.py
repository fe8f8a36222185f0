"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/12 下午3:00
@desc: mcmono 应用包：移动中心单调性公式的数值验证。
"""
