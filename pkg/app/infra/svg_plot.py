# encoding: utf-8
"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/16 下午7:55
@desc: 单调量与残差的 SVG 折线图（matplotlib Agg 后端）。
       SVG 元数据不写日期、hashsalt 固定，同一输入输出字节一致。
"""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from loguru import logger  # noqa: E402

from app.schemas.reports import MonotoneSeries  # noqa: E402

plt.rcParams["svg.hashsalt"] = "mcmono"


def plot_series(path: str | Path, series: MonotoneSeries) -> Path:
    """上图为主单调量，下图为 residual 列（对数坐标，若存在）"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    primary = series.primary if series.primary in series.columns else next(iter(series.columns), None)
    residual = series.columns.get("residual")
    rows = 2 if residual else 1
    fig, axes = plt.subplots(rows, 1, figsize=(7.0, 3.2 * rows), squeeze=False)

    ax = axes[0][0]
    if primary is not None:
        pairs = [(g, v) for g, v in zip(series.grid, series.columns[primary]) if v is not None]
        ax.plot([g for g, _ in pairs], [v for _, v in pairs], marker="o", ms=3, lw=1.2, color="#2c5282")
        ax.set_ylabel(primary)
    ax.set_title(series.title)
    ax.grid(True, ls=":", alpha=0.4)

    if residual:
        rax = axes[1][0]
        pairs = [(g, max(abs(v), 1e-300)) for g, v in zip(series.grid, residual) if v is not None]
        rax.semilogy([g for g, _ in pairs], [v for _, v in pairs], marker=".", lw=1.0, color="#c53030")
        rax.set_ylabel("residual")
        rax.grid(True, ls=":", alpha=0.4)
    axes[-1][0].set_xlabel(series.grid_name)

    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    logger.debug(f"svg written | path={path}")
    return path
