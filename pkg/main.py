"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 下午3:10
@desc: 命令行入口：python main.py <command> [options]
"""
from app.main import cli

if __name__ == "__main__":
    cli()
