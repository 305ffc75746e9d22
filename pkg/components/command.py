"""
命令组件的基类：子命令注册、执行上下文与返回值
"""
import argparse
import logging
from dataclasses import dataclass, field
from typing import Any, AsyncGenerator, Callable, Dict, List, Optional

logger = logging.getLogger(__name__)

Handler = Callable[["Command", "ExecuteContext"], AsyncGenerator["CommandReturn", None]]


@dataclass
class ExecuteContext:
    command: str
    params: Dict[str, Any] = field(default_factory=dict)
    config: Dict[str, Any] = field(default_factory=dict)

    def get(self, key: str, default: Any = None) -> Any:
        """先取命令参数，再取配置项"""
        value = self.params.get(key)
        if value is None:
            value = self.config.get(key, default)
        return value

    @classmethod
    def from_namespace(cls, command: str, namespace: argparse.Namespace, config: Dict[str, Any]):
        params = {k: v for k, v in vars(namespace).items() if k != "command"}
        return cls(command, params, config)


@dataclass
class CommandReturn:
    text: str = ""
    exit_code: int = 0
    # 机器可读输出
    document: Optional[Dict[str, Any]] = None


@dataclass
class Subcommand:
    name: str
    handler: Handler
    help: str = ""
    usage: str = ""
    aliases: List[str] = field(default_factory=list)


class Command:
    def __init__(self):
        self.subcommands: Dict[str, Subcommand] = {}
        self._workbench = None

    def subcommand(self, name: str = "", help: str = "", usage: str = "",
                   aliases: Optional[List[str]] = None):
        def decorator(func: Handler) -> Handler:
            entry = Subcommand(name, func, help, usage, list(aliases or []))
            self.subcommands[name] = entry
            for alias in entry.aliases:
                self.subcommands[alias] = entry
            return func
        return decorator

    def bind(self, workbench):
        self._workbench = workbench
        return self

    def get_plugin(self):
        if self._workbench is None:
            raise RuntimeError(f"{type(self).__name__} is not bound to a workbench")
        return self._workbench

    async def execute(self, ctx: ExecuteContext, name: str = "") -> List[CommandReturn]:
        if name not in self.subcommands:
            raise KeyError(f"{ctx.command} has no subcommand {name!r}")
        results = []
        async for ret in self.subcommands[name].handler(self, ctx):
            results.append(ret)
        logger.debug(f"命令 {ctx.command} 返回 {len(results)} 条结果")
        return results
