import logging
from typing import AsyncGenerator

from cells.errors import WorkbenchError
from components.command import Command, CommandReturn, ExecuteContext
from organs.green import aperiodicity_index, egg_box, green, is_combinatorial, is_regular, render_green

logger = logging.getLogger(__name__)


class GreenCommand(Command):
    def __init__(self):
        super().__init__()

        @self.subcommand(
            name="",
            help="计算乘法半群的 Green 关系与 D 类偏序",
            usage="green brandt",
        )
        async def show_green(self, ctx: ExecuteContext) -> AsyncGenerator[CommandReturn, None]:
            """计算乘法半群的 Green 关系与 D 类偏序"""
            source = ctx.get("algebra")
            try:
                logger.info(f"收到 Green 关系命令: {source}")
                plugin = self.get_plugin()
                S = plugin.resolve_algebra(source)
                G = green(S)
                combinatorial = is_combinatorial(S, G)
                regular = is_regular(S)

                summary = [f"{source}: {S.size} elements, {G.dclass_count} D-classes, "
                           f"{len(G.idempotents)} idempotents",
                           f"combinatorial: {'yes' if combinatorial else 'no'}, "
                           f"regular: {'yes' if regular else 'no'}"]
                index = None
                if combinatorial:
                    index = aperiodicity_index(S)
                    summary.append(f"x^{index} = x^{index + 1}")

                document = {
                    "algebra": source,
                    "size": S.size,
                    "combinatorial": combinatorial,
                    "regular": regular,
                    "aperiodicity_index": index,
                    "dclasses": [
                        {"id": Y,
                         "egg_box": [[list(S.label_of(cell)) for cell in row] for row in egg_box(G, Y)],
                         "idempotents": list(S.label_of(G.idempotents_of(Y)))}
                        for Y in range(G.dclass_count)
                    ],
                    "covers": [[Y, X] for Y, X in G.covers()],
                }
                yield CommandReturn(text="\n".join(summary) + "\n" + render_green(S, G), document=document)

            except (WorkbenchError, OSError) as e:
                logger.error(f"Green 关系计算失败: {e}", exc_info=True)
                yield CommandReturn(text=f"green: {e}", exit_code=2)


# 创建命令实例
command = GreenCommand()
