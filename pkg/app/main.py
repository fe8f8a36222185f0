"""
@author: lzx
@contact: bigdata_lzx@163.com
@time: 2026/10/17 下午3:10
@desc: CLI 入口模块：创建 click 根命令组、注册子命令与全局异常处理。
       异常统一转成 CliResponse 打印到 stdout，进程退出码按错误码分段（见 exit_code_for）。
"""
import json
from typing import Callable, Type

import click
from loguru import logger
from pydantic import ValidationError

from app.api import api_commands
from app.core.config import settings
from app.core.exceptions import ErrorCode, MonoException, exit_code_for
from app.core.logging import configure_logging, log_startup_banner
from app.core.responses import CliResponse, fail

ExceptionHandler = Callable[[click.Context, Exception], CliResponse]


class MonoGroup(click.Group):
    """
    带全局异常处理的命令组，用法与 FastAPI 的 exception_handler 一致：
        @cli.exception_handler(MonoException)
        def handler(ctx, exc): return fail(...)
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._handlers: dict[Type[Exception], ExceptionHandler] = {}

    def exception_handler(self, exc_type: Type[Exception]) -> Callable[[ExceptionHandler], ExceptionHandler]:
        def register(fn: ExceptionHandler) -> ExceptionHandler:
            self._handlers[exc_type] = fn
            return fn
        return register

    def _lookup(self, exc: Exception) -> ExceptionHandler | None:
        for cls in type(exc).__mro__:
            if cls in self._handlers:
                return self._handlers[cls]
        return None

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            # 参数错误属于配置错误
            e.exit_code = exit_code_for(ErrorCode.CONFIG_ERROR)
            raise
        except (click.exceptions.Exit, click.exceptions.Abort, click.ClickException):
            raise
        except Exception as e:
            handler = self._lookup(e)
            if handler is None:
                raise
            resp = handler(ctx, e)
            click.echo(json.dumps(resp.model_dump(), ensure_ascii=False, default=str))
            ctx.exit(resp.exit_code)


def create_cli() -> MonoGroup:
    @click.group(cls=MonoGroup, name=settings.app_name)
    @click.option("--log-level", type=click.Choice(["TRACE", "DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
                  default=None, help="覆盖 settings.logging.level")
    def cli(log_level):
        """移动中心单调性公式的数值验证工具。"""
        configure_logging(log_level)
        log_startup_banner()

    # 1. 全局异常处理
    @cli.exception_handler(MonoException)
    def mono_exception_handler(ctx: click.Context, exc: MonoException) -> CliResponse:
        logger.warning(f"MonoException cmd={ctx.invoked_subcommand} code={exc.code} msg={exc.msg}")
        return fail(code=exc.code, msg=exc.msg, data=exc.data, exit_code=exc.exit_code)

    @cli.exception_handler(ValidationError)
    def validation_exception_handler(ctx: click.Context, exc: ValidationError) -> CliResponse:
        logger.warning(f"ValidationError cmd={ctx.invoked_subcommand} errors={exc.errors()}")
        errors = [{"field": ".".join(str(p) for p in err["loc"]), "msg": err["msg"]} for err in exc.errors()]
        return fail(
            code=ErrorCode.VALIDATION_ERROR,
            msg="参数校验失败",
            data=errors,
            exit_code=exit_code_for(ErrorCode.VALIDATION_ERROR),
        )

    @cli.exception_handler(Exception)
    def generic_exception_handler(ctx: click.Context, exc: Exception) -> CliResponse:
        logger.exception(f"Unhandled exception cmd={ctx.invoked_subcommand}")
        return fail(code=ErrorCode.INTERNAL_ERROR, msg=f"内部错误: {exc}", exit_code=1)

    # 2. 注册子命令
    for command in api_commands:
        cli.add_command(command)

    return cli


cli = create_cli()

if __name__ == "__main__":
    cli()
