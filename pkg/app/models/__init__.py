"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/13 下午2:00
@desc: 几何对象：参数曲面与坐标卡、移动中心球族、曲率流与中心路径、映射与热流。
"""
