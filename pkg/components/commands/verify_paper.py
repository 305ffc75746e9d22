import logging
from typing import AsyncGenerator

from cells.errors import WorkbenchError
from components.command import Command, CommandReturn, ExecuteContext
from systems.suite import SuiteContext, run_suite

logger = logging.getLogger(__name__)


class VerifyPaperCommand(Command):
    def __init__(self):
        super().__init__()

        @self.subcommand(
            name="",
            help="按声明顺序运行全部检查并输出报告",
            usage="verify-paper --only prop-3.2",
            aliases=["vp"],
        )
        async def verify_paper(self, ctx: ExecuteContext) -> AsyncGenerator[CommandReturn, None]:
            """按声明顺序运行全部检查并输出报告"""
            try:
                logger.info("收到检查套件命令")
                config = dict(ctx.config)
                config["n_max"] = ctx.get("n_max")
                only = [name.strip() for entry in (ctx.get("only") or []) for name in entry.split(",")
                        if name.strip()]

                suite = SuiteContext(config)
                report = await run_suite(suite, only=only or None, jobs=ctx.get("jobs"))
                timing = bool(ctx.get("timing"))

                yield CommandReturn(
                    text=report.render_text(timing=timing),
                    exit_code=report.exit_code,
                    document=report.to_document(timing=timing),
                )
                logger.info(f"检查套件结束: {report.verdict}")

            except WorkbenchError as e:
                logger.error(f"检查套件无法运行: {e}", exc_info=True)
                yield CommandReturn(text=f"verify-paper: {e}", exit_code=2)


# 创建命令实例
command = VerifyPaperCommand()
