import logging
from typing import AsyncGenerator

from cells.algebra import Verdict
from cells.errors import WorkbenchError
from components.command import Command, CommandReturn, ExecuteContext
from organs.green import aperiodicity_index
from systems.snfam import (
    build_sn,
    dclass_shape_check,
    sn_report,
    sn_size,
    verify_formulas,
    verify_prop_5_1,
    verify_prop_5_3,
)

logger = logging.getLogger(__name__)


def _render_report(report: dict) -> str:
    lines = [f"{report['name']}: {report['size']} elements"]
    for name, info in report["blocks"].items():
        lines.append(f"  {name:>3}: {info['size']:4d} elements, {info['idempotents']:3d} idempotents")
    lines.append("  order (covers): " + ", ".join(f"{lower} < {upper}" for lower, upper in report["covers"]))
    return "\n".join(lines)


class SnCommand(Command):
    def __init__(self):
        super().__init__()

        @self.subcommand(
            name="",
            help="构造 S_n，输出结构报告或运行全部机械校验",
            usage="sn --n 2 --report --verify",
        )
        async def sn(self, ctx: ExecuteContext) -> AsyncGenerator[CommandReturn, None]:
            """构造 S_n，输出结构报告或运行全部机械校验"""
            n = ctx.get("n")
            try:
                logger.info(f"收到 S_n 命令: n={n}")
                semigroup = build_sn(n, ctx.get("max_size"))
                want_report = ctx.get("report") or not ctx.get("verify")

                sections, document, exit_code = [], {"n": n}, 0
                if want_report:
                    report = sn_report(semigroup)
                    report["expected_size"] = sn_size(n)
                    document["report"] = report
                    sections.append(_render_report(report))

                if ctx.get("verify"):
                    index = aperiodicity_index(semigroup.semigroup)
                    checks = {
                        "formulas": verify_formulas(n, semigroup),
                        "dclasses": dclass_shape_check(n, semigroup),
                        "aperiodic": Verdict.passed(f"x^{index} = x^{index + 1}") if index <= 2
                        else Verdict.violation("x^2 = x^3", detail=f"least index {index}"),
                        "separation": verify_prop_5_3(n, semigroup),
                        "membership": verify_prop_5_1(n, semigroup, ctx.get("rho_reading")),
                    }
                    document["checks"] = {name: {"ok": v.ok, "detail": v.describe(semigroup.semigroup)}
                                          for name, v in checks.items()}
                    lines = [f"{semigroup.name} checks:"]
                    for name, verdict in checks.items():
                        lines.append(f"  [{'PASS' if verdict else 'FAIL'}] {name}: "
                                     f"{verdict.describe(semigroup.semigroup)}")
                    sections.append("\n".join(lines))
                    if not all(checks.values()):
                        exit_code = 1

                yield CommandReturn(text="\n".join(sections), exit_code=exit_code, document=document)

            except WorkbenchError as e:
                logger.error(f"S_n 命令失败: {e}", exc_info=True)
                yield CommandReturn(text=f"sn: {e}", exit_code=2)


# 创建命令实例
command = SnCommand()
