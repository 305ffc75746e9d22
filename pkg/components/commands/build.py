import logging
from typing import AsyncGenerator

from cells.algebra import verify
from cells.algebra_io import dumps_algebra, save_algebra, to_document
from cells.errors import WorkbenchError
from components.command import Command, CommandReturn, ExecuteContext

logger = logging.getLogger(__name__)


class BuildCommand(Command):
    def __init__(self):
        super().__init__()

        @self.subcommand(
            name="",
            help="构造目录中的代数并导出为代数文件",
            usage="build end-chain:3 -o end3.json",
        )
        async def build(self, ctx: ExecuteContext) -> AsyncGenerator[CommandReturn, None]:
            """构造目录中的代数并导出为代数文件"""
            name = ctx.get("name")
            try:
                logger.info(f"收到构造命令: {name}")
                plugin = self.get_plugin()
                A = plugin.resolve_algebra(name)

                verdict = verify(A)
                if not verdict:
                    logger.error(f"{name} 未通过公理校验: {verdict.describe(A)}")
                    yield CommandReturn(text=f"{name}: {verdict.describe(A)}", exit_code=1)
                    return

                out = ctx.get("out")
                if out:
                    save_algebra(A, out)
                    text = f"{name}: {A.kind} with {A.size} elements written to {out}"
                    document = {"name": name, "kind": A.kind, "size": A.size, "path": out}
                else:
                    text = dumps_algebra(A).rstrip("\n")
                    document = to_document(A)
                yield CommandReturn(text=text, document=document)

            except (WorkbenchError, OSError) as e:
                logger.error(f"构造失败: {e}", exc_info=True)
                yield CommandReturn(text=f"build {name}: {e}", exit_code=2)


# 创建命令实例
command = BuildCommand()
