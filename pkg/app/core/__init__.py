"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/12 下午3:00
@desc: 核心基础模块：配置、日志、错误码、输出信封与数值常量。
"""
