# encoding: utf-8
"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/16 下午7:40
@desc: 确定性 CSV 输出：UTF-8、逗号分隔、表头一行、LF 换行，浮点数固定 17 位有效数字。
"""
from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Optional, Sequence

from loguru import logger

from app.core.config import settings
from app.schemas.reports import MonotoneSeries


def format_float(value: Optional[float], digits: Optional[int] = None) -> str:
    """None 输出为空单元格"""
    if value is None:
        return ""
    return f"{float(value):.{digits or settings.output.float_digits}g}"


def write_rows(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[object]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([format_float(v) if isinstance(v, float) or v is None else v for v in row])
    logger.debug(f"csv written | path={path}")
    return path


def write_series(path: str | Path, series: MonotoneSeries) -> Path:
    """网格列在前，其余列按报告声明顺序"""
    names = list(series.columns)
    rows = []
    for i, g in enumerate(series.grid):
        rows.append([float(g)] + [series.columns[name][i] for name in names])
    return write_rows(path, [series.grid_name] + names, rows)
