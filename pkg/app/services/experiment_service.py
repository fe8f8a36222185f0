# encoding: utf-8
"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 上午11:10
@desc: run(config)：按子命令分发到各单调性服务，写出 CSV / SVG / JSON 产物并给出 VerdictRecord。
       判定失败不在这里抛异常，由命令层根据 record.passed 决定退出码。
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Callable

import numpy as np
from loguru import logger

from app.api import dependencies as deps
from app.core.consts import CommandEnum
from app.core.exceptions import ConfigError, ErrorCode, exit_code_for
from app.core.middlewares import track_experiment
from app.core.responses import CliResponse, fail, success
from app.infra.csv_writer import write_rows, write_series
from app.infra.svg_plot import plot_series
from app.models.patch import charts_of
from app.schemas.experiment import ExperimentConfig, VerdictRecord
from app.schemas.reports import SeriesReport, SuiteReport
from app.services.heatflow_mono import heat_sweep
from app.services.identity_suite import run_identity_suite
from app.services.mcf_mono import entropy_scan, mcf_sweep
from app.services.minimal_mono import brendle_hung_check, minimal_mono_sweep
from app.services.pharmonic_mono import pharm_sweep

Outcome = tuple[SeriesReport, dict[str, Any]]


def _min_mono(config: ExperimentConfig) -> Outcome:
    surface, family = deps.get_minimal_setup(config)
    report = minimal_mono_sweep(surface, family, config.s.values(), deps.get_quadrature_spec(config),
                                c_h=config.c_h, fault=config.inject_fault, tolerance=config.tol)
    summary = {
        "surface": charts_of(surface)[0].label,
        "y": family.y.tolist(),
        "verdict": report.verdict,
        "ratio_min": min(report.ratio),
        "ratio_max": max(report.ratio),
    }
    return report, summary


def _bh_check(config: ExperimentConfig) -> Outcome:
    surface, family = deps.get_minimal_setup(config)
    report = brendle_hung_check(surface, family, config.s.values(), deps.get_quadrature_spec(config),
                                density_s_min=config.density_s_min, density_samples=config.density_samples)
    summary = {
        "surface": charts_of(surface)[0].label,
        "y": family.y.tolist(),
        "ratio_at_one": report.ratio_at_one,
        "bound": report.bound,
        "margin": report.margin,
        "density": report.density,
        "density_raw": report.density_raw,
        "equality": report.equality,
    }
    return report, summary


def _mcf_mono(config: ExperimentConfig) -> Outcome:
    flow, weight = deps.get_mcf_setup(config)
    report = mcf_sweep(flow, weight, config.times.values(), deps.get_quadrature_spec(config),
                       fault=config.inject_fault, tolerance=config.tol)
    return report, {"flow": flow.label, "path": weight.path.label, "t0": weight.t0}


def _entropy(config: ExperimentConfig) -> Outcome:
    surface = deps.get_shrinker(config)
    y = deps.get_centre(config, surface.n)
    report = entropy_scan(surface, y, config.a, config.s.values(), deps.get_quadrature_spec(config),
                          tolerance=config.tol)
    return report, {"shrinker": surface.label, "y": y.tolist(), "a": config.a, "entropy_at_0": report.entropy[0]}


def _pharm_mono(config: ExperimentConfig) -> Outcome:
    map_, family = deps.get_pharm_setup(config)
    report = pharm_sweep(map_, family, config.s.values(), deps.get_quadrature_spec(config), tolerance=config.tol)
    return report, {"map": map_.label, "m": map_.m, "p": map_.p, "q": family.q,
                    "y": family.y.tolist(), "constant": report.constant}


def _heat_mono(config: ExperimentConfig) -> Outcome:
    flow, weight = deps.get_heat_setup(config)
    report = heat_sweep(flow, weight, config.times.values(), deps.get_quadrature_spec(config),
                        fault=config.inject_fault, tolerance=config.tol)
    return report, {"flow": flow.label, "path": weight.path.label, "t0": weight.t0}


def _identity_suite(config: ExperimentConfig) -> Outcome:
    report = run_identity_suite(config.seed, config.samples, deps.get_quadrature_spec(config))
    return report, {"seed": config.seed, "samples": config.samples,
                    "failed": [c.name for c in report.checks if not c.passed]}


_HANDLERS: dict[CommandEnum, Callable[[ExperimentConfig], Outcome]] = {
    CommandEnum.MIN_MONO: _min_mono,
    CommandEnum.BH_CHECK: _bh_check,
    CommandEnum.MCF_MONO: _mcf_mono,
    CommandEnum.ENTROPY: _entropy,
    CommandEnum.PHARM_MONO: _pharm_mono,
    CommandEnum.HEAT_MONO: _heat_mono,
    CommandEnum.IDENTITY_SUITE: _identity_suite,
}


def write_csv(path: str | Path, report: SeriesReport) -> Path:
    if isinstance(report, SuiteReport):
        rows = [[c.name, "true" if c.passed else "false", c.worst_residual, c.tolerance] for c in report.checks]
        return write_rows(path, ["name", "passed", "worst_residual", "tolerance"], rows)
    return write_series(path, report.to_series())


def write_artifacts(config: ExperimentConfig, report: SeriesReport) -> dict[str, str]:
    artifacts: dict[str, str] = {}
    if config.out_csv:
        artifacts["csv"] = str(write_csv(config.out_csv, report))
    if config.out_svg and not isinstance(report, SuiteReport):
        artifacts["svg"] = str(plot_series(config.out_svg, report.to_series()))
    if config.out_json:
        artifacts["json"] = str(config.out_json)
    return artifacts


def verdict_response(record: VerdictRecord) -> CliResponse:
    """判定通过 → code 0；失败 → VERDICT_FAILURE，msg 指出最差的检查项与样本"""
    data = record.model_dump(mode="json")
    if record.passed:
        return success(data, msg="pass")
    failed = [c for c in record.checks if not c.passed]
    worst = max(failed, key=lambda c: c.worst_residual)
    where = f" at {worst.worst_at:g}" if worst.worst_at is not None else ""
    return fail(code=ErrorCode.VERDICT_FAILURE,
                msg=f"check {worst.name!r} failed{where}: residual {worst.worst_residual:.3e} > {worst.tolerance:.1e}",
                data=data, exit_code=exit_code_for(ErrorCode.VERDICT_FAILURE))


def write_verdict_json(path: str | Path, record: VerdictRecord) -> Path:
    """与 stdout 相同的 CliResponse 信封"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = verdict_response(record).model_dump()
    path.write_text(json.dumps(payload, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    return path


def run(config: ExperimentConfig) -> VerdictRecord:
    handler = _HANDLERS.get(config.command)
    if handler is None:
        raise ConfigError(f"unknown command {config.command!r}")
    with np.errstate(over="ignore", under="ignore"):
        with track_experiment(config.command.value) as trace:
            report, summary = handler(config)
            artifacts = write_artifacts(config, report)
    record = VerdictRecord.from_checks(trace.experiment_id, config.command.value, report.checks,
                                       report.quadrature_bound, summary)
    record.wall_time = trace.wall_time
    record.artifacts = artifacts
    if config.out_json:
        write_verdict_json(config.out_json, record)
    worst = max(report.checks, key=lambda c: c.worst_residual / c.tolerance if c.tolerance else 0.0, default=None)
    logger.info(
        f"Verdict | cmd={config.command.value} passed={record.passed} checks={len(report.checks)} "
        f"worst={worst.name if worst else '-'}:{record.worst_residual:.3e}"
    )
    return record
