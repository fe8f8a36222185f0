"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/13 上午9:00
@desc: 数值底座：Gauss 求积规则、隐式区域求积、水平曲线提取，以及 CSV / SVG 输出。
"""
