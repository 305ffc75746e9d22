import logging
from typing import AsyncGenerator

from cells.errors import WorkbenchError
from cells.terms import parse_identity
from components.command import Command, CommandReturn, ExecuteContext
from organs.identities import check_identity

logger = logging.getLogger(__name__)


class CheckIdentityCommand(Command):
    def __init__(self):
        super().__init__()

        @self.subcommand(
            name="",
            help="穷举检查代数是否满足恒等式",
            usage="check-identity a21 \"x + x*x = x*x\"",
            aliases=["ci"],
        )
        async def check(self, ctx: ExecuteContext) -> AsyncGenerator[CommandReturn, None]:
            """穷举检查代数是否满足恒等式"""
            source, text = ctx.get("algebra"), ctx.get("identity")
            try:
                logger.info(f"收到恒等式检查命令: {source} ⊨ {text}")
                plugin = self.get_plugin()
                A = plugin.resolve_algebra(source)
                identity = parse_identity(text, macros=True)

                verdict = check_identity(A, identity, budget=ctx.get("budget"),
                                         chunk_size=ctx.get("chunk_size"), jobs=ctx.get("jobs"))
                document = {"algebra": source, "identity": text, "holds": verdict.holds,
                            "evaluated": verdict.evaluated}
                if not verdict.holds:
                    document["assignment"] = {k: A.labels[v] for k, v in verdict.assignment.items()}
                    document["lhs"] = A.labels[verdict.lhs]
                    document["rhs"] = A.labels[verdict.rhs]

                yield CommandReturn(
                    text=f"{source} ⊨ {text}: {verdict.describe(A)}",
                    exit_code=0 if verdict.holds else 1,
                    document=document,
                )
                logger.info(f"恒等式检查完成: holds={verdict.holds}, 求值 {verdict.evaluated} 个赋值")

            except (WorkbenchError, OSError) as e:
                logger.error(f"恒等式检查失败: {e}", exc_info=True)
                yield CommandReturn(text=f"check-identity: {e}", exit_code=2)


# 创建命令实例
command = CheckIdentityCommand()
