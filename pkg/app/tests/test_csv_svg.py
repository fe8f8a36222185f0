# encoding: utf-8

from app.infra.csv_writer import format_float, write_rows, write_series
from app.infra.svg_plot import plot_series
from app.schemas.reports import MinimalMonoReport, MonotoneSeries

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 下午6:55
@desc: CSV / SVG 输出的确定性与格式。
"""


def _series() -> MonotoneSeries:
    report = MinimalMonoReport(title="min-mono flat-disk", grid=[0.1, 0.2, 0.3])
    report.ratio = [2.0, 2.5, 3.0]
    report.bulk_increment = [None, 0.5, 0.5]
    report.residual = [None, 1e-9, 3e-10]
    return report.to_series()


def test_format_float():
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(None) == ""
    assert format_float(1.0) == "1"


def test_series_columns_skip_empty_fields():
    series = _series()
    assert list(series.columns) == ["ratio", "bulk_increment", "residual"]
    assert series.primary == "ratio"
    assert series.grid_name == "s"


def test_csv_layout(tmp_path):
    path = write_series(tmp_path / "out.csv", _series())
    lines = path.read_text(encoding="utf-8").split("\n")
    assert lines[0] == "s,ratio,bulk_increment,residual"
    assert lines[1] == "0.10000000000000001,2,,"
    assert lines[-1] == ""


def test_csv_is_deterministic(tmp_path):
    a = write_series(tmp_path / "a.csv", _series()).read_bytes()
    b = write_series(tmp_path / "b.csv", _series()).read_bytes()
    assert a == b


def test_write_rows_keeps_text(tmp_path):
    path = write_rows(tmp_path / "rows.csv", ["name", "passed", "worst"], [["monotone", "true", 0.25]])
    assert path.read_text(encoding="utf-8") == "name,passed,worst\nmonotone,true,0.25\n"


def test_svg_is_deterministic(tmp_path):
    a = plot_series(tmp_path / "a.svg", _series()).read_bytes()
    b = plot_series(tmp_path / "b.svg", _series()).read_bytes()
    assert a == b
    assert a.lstrip().startswith(b"<?xml")
