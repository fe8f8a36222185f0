# encoding: utf-8
"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/12 下午3:20
@desc: 全局配置管理模块，基于 Pydantic BaseSettings 实现。
       负责加载环境变量与 .env 文件，定义并校验数值实验所需的各项默认配置
       （求积精度、判定容差、日志级别、输出格式等）。
"""
from __future__ import annotations

import os
from enum import Enum

from dotenv import load_dotenv
from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class EnvEnum(str, Enum):
    local = "local"
    dev = "dev"
    test = "test"
    prod = "prod"


class LoggingSettings(BaseModel):
    level: str = "INFO"
    # 以 JSON 行输出日志（便于批量实验归档）
    json_lines: bool = False


class QuadratureSettings(BaseModel):
    """求积默认配置"""
    cells_per_axis: int = Field(8, ge=1)
    order: int = Field(8, ge=2, le=10)
    refinement_depth: int = Field(10, ge=0, le=12)
    level_grid: int = Field(192, ge=8)
    # 误差界超过 tolerance * max(1, |I|) 时抛出 ToleranceNotMetError
    tolerance: float = Field(1e-6, gt=0)
    hermite_order: int = Field(40, ge=4)
    path_nodes: int = Field(32, ge=2)


class ToleranceSettings(BaseModel):
    """各类判定容差"""
    identity_rel: float = 1e-3
    integral_rel: float = 1e-4
    monotone_slack: float = 1e-8
    constancy: float = 1e-8
    equality: float = 1e-6
    stationarity: float = 1e-6
    fd_step_rel: float = 1e-3


class OutputSettings(BaseModel):
    float_digits: int = Field(17, ge=1, le=17)


class Settings(BaseSettings):
    """全局配置入口"""
    model_config = SettingsConfigDict(
        extra="ignore",
        env_nested_delimiter="__",
        env_file_encoding="utf-8"
    )

    app_name: str = "mcmono"
    # debug 打开时，球族在每个求积节点自检定义恒等式
    debug: bool = False

    # 环境标记
    env: EnvEnum = EnvEnum.local

    logging: LoggingSettings = LoggingSettings()
    quadrature: QuadratureSettings = QuadratureSettings()
    tolerances: ToleranceSettings = ToleranceSettings()
    output: OutputSettings = OutputSettings()


def get_settings() -> "Settings":
    """加载配置逻辑"""
    load_dotenv(".env")
    env_from_os = os.getenv("APP_ENV", "local")

    try:
        env = EnvEnum(env_from_os)
    except ValueError:
        env = EnvEnum.local

    base_env_file = ".env"
    env_specific_file = f".env.{env.value}"

    return Settings(
        _env_file=[base_env_file, env_specific_file]
    )


settings: Settings = get_settings()
