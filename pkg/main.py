import argparse
import asyncio
import importlib
import json
import logging
import os
import sys
from typing import Any, Dict, List, Optional

import yaml

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(filename)s (%(lineno)d) - [%(levelname)s] : %(message)s"
ROOT = os.path.dirname(os.path.abspath(__file__))
COMMANDS_DIR = os.path.join(ROOT, "components", "commands")

# 全局选项：目标配置项 -> argparse 参数
GLOBAL_FLAGS = {
    "format": dict(flags=["--format"], choices=["text", "machine"], help="text report or JSON"),
    "budget": dict(flags=["--budget"], type=int, help="assignment cap of exhaustive identity checks"),
    "max_size": dict(flags=["--max-size"], type=int, help="closure size cap"),
    "jobs": dict(flags=["--jobs"], type=int, help="worker threads"),
    "config": dict(flags=["--config"], help="configuration file overriding config/workbench.yaml"),
    "log_level": dict(flags=["--log-level"], choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
                      help="log level on stderr"),
}

ARG_TYPES = {"integer": int, "string": str}


class Workbench:
    def __init__(self):
        self.config = None
        self.config_manager = None
        self.commands: Dict[str, Any] = {}
        self.descriptors: Dict[str, Dict[str, Any]] = {}

    async def initialize(self, config_path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None):
        """加载配置并绑定命令组件"""
        logger.info("工作台加载中...")
        try:
            sys.path.append(ROOT)

            from cells.config import ConfigManager

            self.config_manager = ConfigManager(self)
            self.config = await self.config_manager.load_config(config_path, overrides)
            if not self.commands:
                self.load_commands()
            for command in self.commands.values():
                command.bind(self)

            logger.info(f"工作台加载完成: {len(self.commands)} 个命令")

        except Exception as e:
            logger.error(f"工作台初始化失败: {e}", exc_info=True)
            raise

    def load_commands(self, directory: str = COMMANDS_DIR):
        """按 components/commands/*.yaml 描述文件加载命令"""
        if ROOT not in sys.path:
            sys.path.append(ROOT)
        for entry in sorted(os.listdir(directory)):
            if not entry.endswith(".yaml"):
                continue
            with open(os.path.join(directory, entry), "r", encoding="utf-8") as f:
                descriptor = yaml.safe_load(f)
            name = descriptor["metadata"]["name"]
            execution = descriptor["execution"]["python"]
            module_name = os.path.splitext(execution["path"])[0]
            module = importlib.import_module(f"components.commands.{module_name}")
            cls = getattr(module, execution["attr"])
            instance = getattr(module, "command", None)
            if not isinstance(instance, cls):
                instance = cls()
            self.commands[name] = instance
            self.descriptors[name] = descriptor
            logger.debug(f"命令 {name} 已加载")

    def get_config(self) -> Dict[str, Any]:
        return self.config or {}

    def resolve_algebra(self, source: str):
        """代数文件路径或目录名"""
        from cells.algebra_io import load_algebra
        from systems.catalog import resolve

        if os.path.exists(source) or source.endswith(".json"):
            return load_algebra(source)
        return resolve(source, self.get_config().get("max_size"))

    def build_parser(self) -> argparse.ArgumentParser:
        common = argparse.ArgumentParser(add_help=False)
        for dest, option in GLOBAL_FLAGS.items():
            option = dict(option)
            common.add_argument(*option.pop("flags"), dest=dest, default=argparse.SUPPRESS, **option)

        parser = argparse.ArgumentParser(
            prog="workbench", parents=[common],
            description="Finite-algebra workbench for endomorphism semirings of chains and the S_n family")
        subparsers = parser.add_subparsers(dest="command", required=True)
        for name, descriptor in self.descriptors.items():
            description = descriptor["spec"]["description"]["en_US"]
            sub = subparsers.add_parser(name, parents=[common], help=description, description=description)
            for arg in descriptor["spec"].get("args", []):
                self._add_argument(sub, arg)
        return parser

    @staticmethod
    def _add_argument(parser: argparse.ArgumentParser, arg: Dict[str, Any]):
        help_text = arg.get("description", {}).get("en_US", "")
        if arg.get("positional"):
            parser.add_argument(arg["name"], type=ARG_TYPES.get(arg.get("type"), str), help=help_text)
            return
        kwargs: Dict[str, Any] = {"dest": arg["name"], "help": help_text}
        if arg.get("type") == "flag":
            kwargs["action"] = "store_true"
        else:
            kwargs["type"] = ARG_TYPES.get(arg.get("type"), str)
            if arg.get("choices"):
                kwargs["choices"] = arg["choices"]
            if arg.get("repeat"):
                kwargs["action"] = "append"
            if arg.get("required"):
                kwargs["required"] = True
        parser.add_argument(*arg["flags"], **kwargs)

    async def run(self, argv: Optional[List[str]] = None) -> int:
        if not self.descriptors:
            self.load_commands()
        args = self.build_parser().parse_args(argv)

        overrides = {dest: getattr(args, dest) for dest in GLOBAL_FLAGS if dest != "config" and hasattr(args, dest)}
        config_path = getattr(args, "config", None)
        for dest in GLOBAL_FLAGS:
            if hasattr(args, dest):
                delattr(args, dest)

        from cells.errors import WorkbenchError
        from components.command import ExecuteContext

        try:
            await self.initialize(config_path, overrides)
        except WorkbenchError as e:
            print(f"workbench: {e}", file=sys.stderr)
            return 2
        logging.getLogger().setLevel(self.config["log_level"])

        ctx = ExecuteContext.from_namespace(args.command, args, self.config)
        results = await self.commands[args.command].execute(ctx)
        for ret in results:
            if ret.exit_code == 2:
                print(ret.text, file=sys.stderr)
            elif self.config["format"] == "machine":
                document = ret.document if ret.document is not None else {"text": ret.text}
                print(json.dumps(document, ensure_ascii=False, indent=2))
            else:
                print(ret.text)
        return max((ret.exit_code for ret in results), default=0)


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format=LOG_FORMAT, stream=sys.stderr)
    return asyncio.run(Workbench().run(argv))


if __name__ == "__main__":
    sys.exit(main())
