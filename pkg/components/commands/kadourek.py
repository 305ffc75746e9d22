import logging
from typing import AsyncGenerator, List

from cells.algebra import FiniteAlgebra
from cells.errors import WorkbenchError
from components.command import Command, CommandReturn, ExecuteContext
from organs.green import green
from organs.kadourek import SeparationWitness, drop_dclasses, in_var_b21
from systems.snfam import block_representative

logger = logging.getLogger(__name__)


def _element(S: FiniteAlgebra, label: str) -> int:
    for candidate in (label, block_representative(label)):
        try:
            return S.index(candidate)
        except KeyError:
            continue
    raise WorkbenchError(f"--drop-dclass {label!r} names no element or block")


def _witness_rows(S: FiniteAlgebra, witnesses: List[SeparationWitness]) -> List[dict]:
    rows = []
    for w in witnesses:
        ob = w.obligation
        row = {"X": ob.X, "Y": ob.Y, "e": S.labels[ob.e], "f": S.labels[ob.f], "g": S.labels[ob.g]}
        if w.separated:
            row["filter"] = sorted(w.filter)
            row["tau"] = [list(S.label_of(block)) for block in w.partition.classes]
        rows.append(row)
    return rows


class KadourekCommand(Command):
    def __init__(self):
        super().__init__()

        @self.subcommand(
            name="",
            help="用条件 (∗) 判定有限组合逆半群是否属于 B₂¹ 生成的簇",
            usage="kadourek tn:2:1",
            aliases=["star"],
        )
        async def membership(self, ctx: ExecuteContext) -> AsyncGenerator[CommandReturn, None]:
            """用条件 (∗) 判定有限组合逆半群是否属于 B₂¹ 生成的簇"""
            source = ctx.get("algebra")
            try:
                logger.info(f"收到条件 (∗) 判定命令: {source}")
                plugin = self.get_plugin()
                S = plugin.resolve_algebra(source)

                dropped = ctx.get("drop_dclass") or []
                if dropped:
                    G = green(S)
                    classes = {G.d[_element(S, label)] for label in dropped}
                    S = drop_dclasses(S, G, classes)
                    logger.info(f"已去掉 {len(classes)} 个 D 类，剩余 {S.size} 个元素")

                verdict = in_var_b21(S, ctx.get("rho_reading"))
                lines = [f"{source}: {'member' if verdict else 'not a member'} of the variety generated by B21",
                         f"  {verdict.reason}"]
                rows = []
                if verdict.star is not None:
                    witnesses = list(verdict.star.passes)
                    if verdict.star.failure is not None:
                        witnesses.append(verdict.star.failure)
                    rows = _witness_rows(S, witnesses)
                    for row in rows:
                        head = f"  X=D{row['X']} Y=D{row['Y']} e={row['e']} f={row['f']} g={row['g']}"
                        if "filter" in row:
                            K = "{" + ", ".join(f"D{k}" for k in row["filter"]) + "}"
                            tau = " | ".join("{" + ", ".join(block) + "}" for block in row["tau"])
                            lines.append(f"{head}  K={K}  tau: {tau}")
                        else:
                            lines.append(f"{head}  no separating filter")
                elif verdict.witness is not None:
                    lines.append(f"  witness: {S.labels[verdict.witness]}")

                document = {"algebra": source, "dropped": list(dropped), "member": verdict.member,
                            "reason": verdict.reason, "witnesses": rows}
                if verdict.witness is not None:
                    document["witness"] = S.labels[verdict.witness]
                yield CommandReturn(text="\n".join(lines), exit_code=0 if verdict else 1, document=document)

            except (WorkbenchError, OSError) as e:
                logger.error(f"条件 (∗) 判定失败: {e}", exc_info=True)
                yield CommandReturn(text=f"kadourek: {e}", exit_code=2)


# 创建命令实例
command = KadourekCommand()
