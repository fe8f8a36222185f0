# encoding: utf-8

import json

import numpy as np
import pytest

from app.main import cli
from app.tests.conftest import envelope

"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 下午7:30
@desc: 命令行端到端：退出码分段、stdout 信封、--config 与选项合并、CSV / SVG / JSON 产物。
"""

FLAT_DISK = ["min-mono", "--surface", "flat-disk", "--orient-normal-to-y", "--y", "0.3,0,0.4"]
CATENOID = ["min-mono", "--surface", "catenoid", "--y", "on-surface-nearest-origin", "--s", "0.05:0.45:4"]


def test_help_lists_commands(runner):
    result = runner.invoke(cli, ["--help"])
    assert result.exit_code == 0
    for name in ("min-mono", "bh-check", "mcf-mono", "entropy", "pharm-mono", "heat-mono", "identity-suite"):
        assert name in result.output


def test_min_mono_help_describes_area_ratio(runner):
    result = runner.invoke(cli, ["min-mono", "--help"])
    assert result.exit_code == 0
    assert "s^{-k/2}|Σ∩E_s|" in result.output


def test_min_mono_passes(runner):
    result = runner.invoke(cli, FLAT_DISK + ["--s", "0.05:1:4"])
    assert result.exit_code == 0, result.output
    env = envelope(result)
    assert (env["code"], env["exit_code"], env["msg"]) == (0, 0, "pass")
    data = env["data"]
    assert data["passed"] and data["command"] == "min-mono"
    assert data["summary"]["ratio_min"] == pytest.approx(np.pi * 0.75, rel=1e-8)
    assert [c["name"] for c in data["checks"]] == ["monotone", "differential_identity", "flux_nonnegative",
                                                   "integral_identity"]


def test_injected_fault_exits_2(runner):
    result = runner.invoke(cli, CATENOID + ["--inject-fault", "negate-flux"])
    assert result.exit_code == 2
    env = envelope(result)
    assert env["code"] == 20000 and env["exit_code"] == 2
    assert "failed" in env["msg"]
    assert env["data"]["passed"] is False


@pytest.mark.parametrize("args", [
    ["min-mono", "--surface", "torus"],
    ["min-mono", "--bogus"],
    ["min-mono", "--config", "/nonexistent/experiment.conf"],
])
def test_usage_errors_exit_3(runner, args):
    assert runner.invoke(cli, args).exit_code == 3


def test_centre_outside_unit_ball_exits_3(runner):
    result = runner.invoke(cli, ["min-mono", "--surface", "flat-disk", "--orient-normal-to-y", "--y", "0,0,1.2"])
    assert result.exit_code == 3
    env = envelope(result)
    assert env["code"] == 30000
    assert "|y|" in env["msg"]


def test_quadrature_tolerance_exits_4(runner):
    result = runner.invoke(cli, FLAT_DISK + ["--s", "0.05:1:2", "--quad-tol", "1e-300"])
    assert result.exit_code == 4
    env = envelope(result)
    assert env["code"] == 40000
    assert "bound" in env["data"]


def test_config_file_and_flag_merge(runner, tmp_path):
    conf = tmp_path / "disk.conf"
    conf.write_text(
        "# flat disk\n"
        "command = min-mono\n"
        "surface = flat-disk\n"
        "orient_normal_to_y = true\n"
        "y = 0.3,0,0.4\n"
        "s = 0.05:1:6\n",
        encoding="utf-8",
    )
    out_json = tmp_path / "out" / "verdict.json"
    out_csv = tmp_path / "out" / "series.csv"
    out_svg = tmp_path / "out" / "series.svg"
    result = runner.invoke(cli, ["min-mono", "--config", str(conf), "--s", "0.05:1:3",
                                 "--out-json", str(out_json), "--out-csv", str(out_csv), "--out-svg", str(out_svg)])
    assert result.exit_code == 0, result.output
    env = envelope(result)
    assert json.loads(out_json.read_text(encoding="utf-8")) == env
    lines = out_csv.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("s,ratio,")
    # 命令行 --s 覆盖文件里的 s
    assert len(lines) == 4
    assert out_svg.read_bytes().lstrip().startswith(b"<?xml")
    assert set(env["data"]["artifacts"]) == {"csv", "svg", "json"}


def test_config_file_error_reports_line(runner, tmp_path):
    conf = tmp_path / "bad.conf"
    conf.write_text("command = min-mono\nsurface = catenoid\nneck = -1\n", encoding="utf-8")
    result = runner.invoke(cli, ["min-mono", "--config", str(conf)])
    assert result.exit_code == 3
    env = envelope(result)
    assert env["msg"].startswith("line 3:")
    assert env["data"][0]["field"] == "neck"


def test_config_file_for_other_command(runner, tmp_path):
    conf = tmp_path / "entropy.conf"
    conf.write_text("command = entropy\nflow = sphere\n", encoding="utf-8")
    result = runner.invoke(cli, ["min-mono", "--config", str(conf)])
    assert result.exit_code == 3
    assert envelope(result)["data"] == {"field": "command", "line": 1}


def test_mcf_mono_plane(runner):
    result = runner.invoke(cli, ["mcf-mono", "--flow", "plane", "--times=-1:-0.1:4"])
    assert result.exit_code == 0, result.output
    assert envelope(result)["data"]["summary"]["path"]


def test_entropy_circle(runner):
    result = runner.invoke(cli, ["entropy", "--flow", "circle", "--y", "0.3,0.1", "--s", "0:1:3"])
    assert result.exit_code == 0, result.output
    summary = envelope(result)["data"]["summary"]
    assert summary["entropy_at_0"] == pytest.approx(np.sqrt(2 * np.pi / np.e), rel=1e-10)


def test_pharm_mono_radial(runner):
    result = runner.invoke(cli, ["pharm-mono", "--map", "radial", "--s", "0.1:1:4"])
    assert result.exit_code == 0, result.output
    summary = envelope(result)["data"]["summary"]
    assert summary["constant"] is True
    assert (summary["m"], summary["p"], summary["q"]) == (3, 2.0, 2.0)


def test_pharm_mono_rejects_q_above_p(runner):
    result = runner.invoke(cli, ["pharm-mono", "--q", "2.5", "--s", "0.1:1:2"])
    assert result.exit_code == 3


def test_heat_mono_linear(runner):
    result = runner.invoke(cli, ["heat-mono", "--heat-flow", "linear", "--times=-1:-0.2:3"])
    assert result.exit_code == 0, result.output
    assert envelope(result)["data"]["passed"]


def test_identity_suite_command(runner, tmp_path):
    out_csv = tmp_path / "suite.csv"
    result = runner.invoke(cli, ["identity-suite", "--samples", "5", "--seed", "3", "--out-csv", str(out_csv)])
    assert result.exit_code == 0, result.output
    assert envelope(result)["data"]["summary"]["failed"] == []
    assert out_csv.read_text(encoding="utf-8").startswith("name,passed,worst_residual,tolerance\n")


def test_log_level_override_keeps_stdout_clean(runner):
    result = runner.invoke(cli, ["--log-level", "warning", "heat-mono", "--heat-flow", "zero", "--times=-1:-0.2:3"])
    assert result.exit_code == 0, result.output
    assert "App starting" not in result.stderr
    assert result.stdout.strip().startswith("{")
